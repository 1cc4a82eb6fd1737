"""Lattice-vector catalog of the candidate tori (literal data).

Each row is ``(index_k12, index_k3, vector)``: the running index used when
``kappa = 2`` (k = 1, 2), the index used for ``k >= 3`` (``None`` when the row
only belongs to the ``kappa = 2`` level), and the integer 8-vector.  The last
coordinate of row 1 is ``ceil(k/2)`` and is stored as ``None``.

For dimension ``d`` only rows that vanish in the first ``8 - d`` coordinates
apply; they are read off in the last ``d`` coordinates.
"""
import hashlib

ROWS = (
    (  1,    1, (0, 0, 0, 0, 0, 0, 0, None)),
    (  2,    2, (0, 0, 0, 0, 0, 0, 1, 0)),
    (  3,    3, (0, 0, 0, 0, 0, 0, 1, 1)),
    (  4,    4, (0, 0, 0, 0, 0, 1, 0, 0)),
    (  5,    5, (0, 0, 0, 0, 0, 1, 1, 0)),
    (  6,    6, (0, 0, 0, 0, 0, 1, 1, 1)),
    (  7,    7, (0, 0, 0, 0, 1, 0, 0, 0)),
    (  8,    8, (0, 0, 0, 0, 1, 0, -1, 0)),
    (  9,    9, (0, 0, 0, 0, 1, -1, -1, 0)),
    ( 10,   10, (0, 0, 0, 0, 1, 0, -1, -1)),
    ( 11,   11, (0, 0, 0, 0, 1, -1, -1, -1)),
    ( 12, None, (0, 0, 0, 0, 1, -1, -2, -1)),
    ( 13,   12, (0, 0, 0, 1, 0, 0, 0, 0)),
    ( 14,   13, (0, 0, 0, 1, 0, -1, 0, 0)),
    ( 15,   14, (0, 0, 0, 1, 1, -1, 0, 0)),
    ( 16,   15, (0, 0, 0, 1, 1, 0, 0, 0)),
    ( 17,   16, (0, 0, 0, 1, 0, 0, 1, 1)),
    ( 18,   17, (0, 0, 0, 1, 0, 0, 1, 0)),
    ( 19,   18, (0, 0, 0, 1, 1, -1, -1, -1)),
    ( 20,   19, (0, 0, 0, 1, 1, -1, -1, 0)),
    ( 21,   20, (0, 0, 1, 0, 0, 0, 0, 0)),
    ( 22,   21, (0, 0, 1, -1, -1, 1, 0, 0)),
    ( 23,   22, (0, 0, 1, 0, -1, 0, 0, 0)),
    ( 24,   23, (0, 0, 1, -1, -1, 0, 0, 0)),
    ( 25,   24, (0, 0, 1, 0, -1, 0, 1, 1)),
    ( 26,   25, (0, 0, 1, 0, -1, 0, 1, 0)),
    ( 27,   26, (0, 0, 1, 0, -1, 1, 1, 1)),
    ( 28,   27, (0, 0, 1, -1, -1, 1, 1, 1)),
    ( 29,   28, (0, 0, 1, 0, -1, 1, 1, 0)),
    ( 30,   29, (0, 0, 1, -1, -1, 1, 1, 0)),
    ( 31,   30, (0, 0, 1, -1, -2, 1, 1, 1)),
    ( 32,   31, (0, 0, 1, -1, -2, 1, 1, 0)),
    ( 33, None, (0, 0, 1, -1, -2, 2, 2, 1)),
    ( 34, None, (0, 0, 1, 0, -1, 1, 2, 1)),
    ( 35, None, (0, 0, 1, 0, -2, 1, 2, 1)),
    ( 36, None, (0, 0, 1, -1, -2, 1, 2, 1)),
    ( 37,   32, (0, 1, 0, 0, 0, 0, 0, 0)),
    ( 38,   33, (0, 1, 0, 0, 0, -1, -1, 0)),
    ( 39,   34, (0, 1, 0, 0, 0, 0, -1, 0)),
    ( 40,   35, (0, 1, 0, -1, 0, 0, -1, 0)),
    ( 41,   36, (0, 1, 0, 0, 1, 0, -1, 0)),
    ( 42,   37, (0, 1, -1, 0, 1, 0, -1, 0)),
    ( 43,   38, (0, 1, 0, 0, 1, -1, -1, 0)),
    ( 44,   39, (0, 1, -1, 0, 1, -1, -1, 0)),
    ( 45,   40, (0, 1, 0, 1, 1, -1, -1, 0)),
    ( 46,   41, (0, 1, -1, 1, 1, -1, -1, 0)),
    ( 47,   42, (0, 1, -1, 1, 2, -1, -1, 0)),
    ( 48,   43, (0, 1, 0, 0, 1, -1, -2, 0)),
    ( 49,   44, (0, 1, -1, 0, 1, -1, -2, 0)),
    ( 50,   45, (0, 1, 0, 0, 1, -1, -2, -1)),
    ( 51,   46, (0, 1, -1, 0, 1, -1, -2, -1)),
    ( 52,   47, (0, 1, -1, 1, 2, -2, -2, 0)),
    ( 53,   48, (0, 1, -1, 1, 2, -2, -2, -1)),
    ( 54,   49, (0, 1, 0, 0, 0, 0, 0, 1)),
    ( 55,   50, (0, 1, -1, 0, 2, -1, -2, 0)),
    ( 56,   51, (0, 1, -1, 1, 2, -1, -2, 0)),
    ( 57,   52, (0, 1, -1, 0, 2, -1, -2, -1)),
    ( 58,   53, (0, 1, -1, 1, 2, -1, -2, -1)),
    ( 59, None, (0, 1, -2, 1, 3, -2, -3, -1)),
    ( 60, None, (0, 1, -1, 1, 2, -2, -3, -1)),
    ( 61, None, (0, 1, -1, 0, 2, -2, -3, -1)),
    ( 62, None, (0, 1, -1, 0, 2, -1, -3, -1)),
    ( 63, None, (0, 1, -1, 1, 3, -2, -3, -1)),
    ( 64,   54, (1, 0, 0, 0, 0, 0, 0, 0)),
    ( 65,   55, (1, 0, 0, -1, -1, 0, -1, 0)),
    ( 66,   56, (1, 0, 0, 0, 0, -1, -1, 0)),
    ( 67,   57, (1, 1, -1, 0, 1, -1, -2, 0)),
    ( 68,   58, (1, 0, 0, 0, 0, 0, -1, 0)),
    ( 69,   59, (1, 0, 0, -1, 0, 0, -1, 0)),
    ( 70,   60, (1, 0, -1, 0, 0, -1, -1, 0)),
    ( 71,   61, (1, -1, 0, -1, -1, 1, 0, 0)),
    ( 72,   62, (1, -1, 0, 0, -1, 0, 0, 0)),
    ( 73,   63, (1, -1, 0, -1, -1, 0, 0, 0)),
    ( 74,   64, (1, 0, -1, 0, 0, 0, -1, 0)),
    ( 75,   65, (1, 0, -1, -1, 0, 0, -1, 0)),
    ( 76,   66, (1, -1, -1, 0, 0, 0, 0, 0)),
    ( 77,   67, (1, -1, 0, 0, 0, 0, 0, 0)),
    ( 78,   68, (1, 0, -1, 0, 1, 0, -1, 0)),
    ( 79,   69, (1, 0, -1, 0, 1, -1, -1, 0)),
    ( 80,   70, (1, 0, -1, 1, 1, -1, -1, 0)),
    ( 81,   71, (1, -1, 0, -1, -2, 1, 1, 0)),
    ( 82,   72, (1, -1, 0, 0, -1, 0, 1, 0)),
    ( 83,   73, (1, -1, 0, 0, -1, 0, 1, 1)),
    ( 84,   74, (1, 0, -1, 0, 1, -1, -2, -1)),
    ( 85,   75, (1, 0, -1, 0, 1, -1, -2, 0)),
    ( 86,   76, (1, -1, 0, 0, -1, 1, 1, 0)),
    ( 87,   77, (1, -1, 0, -1, -1, 1, 1, 0)),
    ( 88,   78, (1, -1, 0, 0, -1, 1, 1, 1)),
    ( 89,   79, (1, -1, 0, -1, -1, 1, 1, 1)),
    ( 90,   80, (1, 0, 0, -1, -1, 1, 0, 0)),
    ( 91,   81, (1, -1, 0, -1, -2, 1, 1, 1)),
    ( 92,   82, (1, 0, 0, 0, -1, 0, 0, 0)),
    ( 93,   83, (1, 0, 0, -1, -1, 0, 0, 0)),
    ( 94,   84, (1, 0, 0, 0, 0, 0, 0, 1)),
    ( 95,   85, (1, 0, -1, 0, 0, 0, 0, 0)),
    ( 96,   86, (1, 0, 0, -1, -1, 1, 0, 1)),
    ( 97,   87, (1, 0, 0, 0, -1, 0, 0, 1)),
    ( 98,   88, (1, 0, 0, -1, -1, 0, 0, 1)),
    ( 99,   89, (1, 0, -1, 0, 0, 0, 0, 1)),
    (100,   90, (1, -1, 1, -1, -2, 1, 1, 0)),
    (101,   91, (1, -1, 1, -1, -2, 1, 1, 1)),
    (102, None, (1, -1, 0, 0, -1, 1, 2, 1)),
    (103, None, (1, -1, 1, -1, -3, 2, 2, 1)),
    (104, None, (1, -1, 1, -2, -3, 2, 2, 1)),
    (105, None, (1, -1, 0, 0, -2, 1, 2, 1)),
    (106, None, (1, 0, 1, -1, -2, 1, 1, 1)),
    (107, None, (1, -1, 0, -1, -2, 2, 2, 1)),
    (108, None, (1, 0, 0, 0, -1, 0, 1, 1)),
    (109, None, (1, -1, 1, 0, -2, 1, 2, 1)),
    (110, None, (1, 0, 0, -1, -2, 1, 1, 1)),
    (111, None, (1, 0, 0, -1, -1, 1, 1, 1)),
    (112, None, (1, -1, 1, -1, -3, 2, 3, 1)),
    (113, None, (1, -2, 1, -1, -3, 2, 3, 1)),
    (114, None, (1, -1, 1, -1, -3, 2, 3, 2)),
    (115, None, (1, -1, 1, -1, -2, 2, 2, 1)),
    (116, None, (1, -1, 1, -1, -3, 1, 2, 1)),
    (117, None, (1, 0, 0, 0, -1, 1, 1, 1)),
    (118, None, (1, -1, 0, -1, -2, 1, 2, 1)),
    (119, None, (1, -1, 1, -1, -2, 1, 2, 1)),
    (120, None, (2, -1, 0, -1, -2, 1, 1, 1)),
)

# Red index set (k >= 3 numbering): rows whose coefficient is b_{k,d}.
RED_INDICES = frozenset([4, 7, *range(12, 16), *range(20, 24), *range(33, 43), *range(55, 71)])

# Index set (k >= 3 numbering) whose outer products span the symmetric
# matrices; the first d(d+1)/2 entries serve dimension d.
SPANNING_INDICES = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 14, 16, 17,
                    *range(20, 26), *range(32, 38), 49,
                    54, 56, 64, 66, 67, 82, 83, 84)

CHECKSUM = "c4c0e61ef77eac6fe4a0b319b3a3556300852507fbb1c53111c3cbe38f2d1d47"


def digest() -> str:
    return hashlib.sha256(repr((ROWS, sorted(RED_INDICES), SPANNING_INDICES)).encode()).hexdigest()
