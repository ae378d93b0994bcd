"""
Eliminacion gaussiana sobre F_q
"""

from typing import List, Optional, Sequence, Tuple

from .field import PrimeField


Matrix = List[List[int]]


def row_reduce(field: PrimeField, matrix: Sequence[Sequence[int]]) -> Tuple[Matrix, List[int]]:
    """
    Forma escalonada reducida por filas

    Returns:
        (matriz reducida, columnas pivote)
    """
    q = field.q
    rows = [[v % q for v in row] for row in matrix]
    if not rows:
        return rows, []
    n_rows, n_cols = len(rows), len(rows[0])
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((k for k in range(r, n_rows) if rows[k][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = field.inverse(rows[r][c])
        rows[r] = [v * inv % q for v in rows[r]]
        for k in range(n_rows):
            if k != r and rows[k][c]:
                factor = rows[k][c]
                rows[k] = [(a - factor * b) % q for a, b in zip(rows[k], rows[r])]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(field: PrimeField, matrix: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(field, matrix)[1])


def is_invertible(field: PrimeField, matrix: Sequence[Sequence[int]]) -> bool:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        return False
    return rank(field, matrix) == n


def determinant(field: PrimeField, matrix: Sequence[Sequence[int]]) -> int:
    q = field.q
    rows = [[v % q for v in row] for row in matrix]
    n = len(rows)
    det = 1
    for c in range(n):
        pivot = next((k for k in range(c, n) if rows[k][c]), None)
        if pivot is None:
            return 0
        if pivot != c:
            rows[c], rows[pivot] = rows[pivot], rows[c]
            det = -det
        det = det * rows[c][c] % q
        inv = field.inverse(rows[c][c])
        for k in range(c + 1, n):
            if rows[k][c]:
                factor = rows[k][c] * inv % q
                rows[k] = [(a - factor * b) % q for a, b in zip(rows[k], rows[c])]
    return det % q


def solve(field: PrimeField, a: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[List[int]]:
    """
    Resolver A x = b; las variables libres quedan en cero

    Returns:
        Una solucion, o None si el sistema es inconsistente
    """
    n_cols = len(a[0]) if a else 0
    augmented = [list(row) + [rhs] for row, rhs in zip(a, b)]
    reduced, pivots = row_reduce(field, augmented)
    if n_cols in pivots:
        return None
    solution = [0] * n_cols
    for r, c in enumerate(pivots):
        solution[c] = reduced[r][n_cols]
    return solution
