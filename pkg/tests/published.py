"""Published reference values, typed in by hand for the tests.

Kept separate from the package's own golden data so the two can catch each
other's typos.
"""

# d: (kissing number, packing density, Lambda_1), 4 decimals
LAMBDA1 = {
    1: (2, 1.0, 39.4784),
    2: (6, 0.9069, 45.5858),
    3: (12, 0.7405, 49.7397),
    4: (24, 0.6169, 55.8309),
    5: (40, 0.4653, 59.8381),
    6: (72, 0.3729, 65.7460),
    7: (126, 0.2953, 71.5131),
    8: (240, 0.2537, 78.9568),
}

# Lambda_{k,d} of the candidate tori, rows k = (1,2), (3,4), ..., (19,20); columns d = 1..8
LAMKD = [
    [39.478, 45.586, 49.740, 55.831, 59.838, 65.746, 71.513, 78.957],
    [157.914, 81.546, 71.005, 68.648, 70.596, 72.363, 76.480, 81.033],
    [355.306, 120.115, 91.527, 82.487, 81.768, 81.494, 84.590, 88.336],
    [631.655, 159.162, 110.262, 94.644, 91.275, 89.217, 91.387, 94.461],
    [986.960, 198.387, 127.623, 105.511, 99.567, 95.873, 97.187, 99.662],
    [1421.223, 237.697, 143.920, 115.401, 106.966, 101.748, 102.262, 104.187],
    [1934.442, 277.057, 159.365, 124.532, 113.685, 107.029, 106.790, 108.204],
    [2526.619, 316.446, 174.109, 133.050, 119.864, 111.845, 110.892, 111.826],
    [3197.752, 355.855, 188.263, 141.062, 125.605, 116.283, 114.651, 115.132],
    [3947.842, 395.279, 201.909, 148.649, 130.981, 120.410, 118.128, 118.179],
]

KISSING = (2, 6, 12, 24, 40, 72, 126, 240)
MULT_GENERIC = (2, 6, 12, 22, 38, 62, 106, 182)
