"""Exact linear algebra over a sympy field domain (K = Q(t) or Q) through DomainMatrix."""

from sympy.polys.matrices import DomainMatrix


def _matrix(rows, ncols, domain):
    rows = [list(row) for row in rows]
    return DomainMatrix(rows, (len(rows), ncols), domain, fmt="sparse")


def row_echelon(rows, ncols, domain):
    """
    Reduced row echelon form with normalized pivots.

    Args:
        rows (iterable): Row vectors (sequences of domain elements)
        ncols (int): Number of columns
        domain: sympy field domain of the entries

    Returns:
        tuple: (list of nonzero row tuples, tuple of pivot columns)
    """
    rows = [row for row in rows if any(row)]
    if not rows:
        return [], ()
    echelon, pivots = _matrix(rows, ncols, domain).rref()
    return [tuple(row) for row in echelon.to_list()[: len(pivots)]], tuple(pivots)


def reduce_vector(vector, rows, pivots):
    """Residual of ``vector`` modulo the span of reduced echelon ``rows``."""
    v = list(vector)
    for row, pivot in zip(rows, pivots):
        c = v[pivot]
        if not c:
            continue
        for k in range(pivot, len(v)):
            if row[k]:
                v[k] -= row[k] * c
    return tuple(v)


def nullspace(rows, ncols, domain):
    """Basis of {v : M v = 0}; each vector has a 1 at its free column."""
    rows = [row for row in rows if any(row)]
    if not rows:
        return [tuple(domain.one if i == j else domain.zero for j in range(ncols)) for i in range(ncols)]
    echelon, pivots = _matrix(rows, ncols, domain).rref()
    if len(pivots) == ncols:
        return []
    return [tuple(v) for v in echelon.nullspace_from_rref(pivots).to_list()]


def left_kernel(vectors, ncols, domain):
    """Basis of the coefficient vectors c with sum(c[s] * vectors[s]) = 0."""
    if not vectors:
        return []
    return nullspace(_matrix(vectors, ncols, domain).transpose().to_list(), len(vectors), domain)


def rank(rows, ncols, domain):
    rows = [row for row in rows if any(row)]
    if not rows:
        return 0
    return _matrix(rows, ncols, domain).rank()
