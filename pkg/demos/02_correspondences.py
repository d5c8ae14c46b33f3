"""The category of correspondences and its self-duality.

Spans compose by pullback; every finite set is self-dual, with evaluation
and coevaluation spans built from the diagonal.  The two triangle
composites land back on the identity span, witnessed by an explicit
isomorphism of spans.
"""

from sixff.corr import ALL, GeometricSetup, Span, compose_spans, dual_data, span_iso
from sixff.finset import FinSetCategory

cat = FinSetCategory()
setup = GeometricSetup(cat, ALL)

X = cat.add_object((0, 1, 2))
print("self-duality of a 3-element set:")
dd = dual_data(X, setup)
print("  evaluation span:   %d x %d <- %d -> point" %
      (9, 9, len(dd.ev.apex)))
print("  coevaluation span: point <- %d -> 9" % len(dd.coev.apex))
print("  triangle 1 witness found: %s" % (dd.triangle1 is not None))
print("  triangle 2 witness found: %s" % (dd.triangle2 is not None))

print("\ncomposition by pullback:")
two = cat.add_object((0, 1))
pt = cat.terminal
s = Span(pt, two, pt, cat.to_terminal(two), cat.to_terminal(two))
c = compose_spans(s, s, setup)
print("  [* <- 2 -> *] composed with itself has apex of size %d"
      % len(c.apex))

print("\nleg swap reverses composition:")
lhs = compose_spans(s, s, setup).swap()
rhs = compose_spans(s.swap(), s.swap(), setup)
print("  swap(s∘s) is isomorphic to swap(s)∘swap(s): %s"
      % (span_iso(cat, lhs, rhs) is not None))
