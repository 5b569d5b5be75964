"""Pure-Python semigroup enumeration kernels.

Elements of a generator-presented graded semigroup are packed into single
integers (one bit field per payload coordinate, nonnegative by a prior
shear), so that adding a generator is a plain integer addition and the
per-degree layers are sets of ints.  The compiled twin in ``_speedups``
implements the same contract for codes that fit in 64 bits.

The degree-d layer satisfies ``S_d = union over generators g of
(g + S_{d - deg g})`` with ``S_0 = {0}``, which is the dynamic program
used by both backends.
"""

from __future__ import annotations

BACKEND = "python"
MAX_CODE = None  # arbitrary precision


def grow_counts(gen_degs, gen_codes, max_degree, window):
    """Hilbert-function values ``|S_d|`` for d = 0..max_degree.

    Only the last ``window`` layers are retained, so memory stays
    proportional to the largest layer rather than to the whole range.
    """
    counts = [0] * (max_degree + 1)
    counts[0] = 1
    layers = {0: frozenset((0,))}
    for d in range(1, max_degree + 1):
        layer = set()
        for dg, cg in zip(gen_degs, gen_codes):
            src = layers.get(d - dg)
            if src:
                layer.update(x + cg for x in src)
        layers[d] = layer
        counts[d] = len(layer)
        layers.pop(d - window, None)
    return counts


def grow_sets(gen_degs, gen_codes, max_degree):
    """Sorted per-degree code lists for d = 0..max_degree."""
    layers = [set() for _ in range(max_degree + 1)]
    layers[0].add(0)
    for d in range(1, max_degree + 1):
        layer = layers[d]
        for dg, cg in zip(gen_degs, gen_codes):
            if 0 <= d - dg:
                layer.update(x + cg for x in layers[d - dg])
    return [sorted(layer) for layer in layers]
