"""Reference rows for the four test curves.

Each row: (label, displayed value, [(code, CLSP label), ...], % error).
CLSPs of finite bases use the global labels (rank by |s|); the row for
infinity uses indices relative to infinity.
"""

F1 = "-z^3 + (z + z^2 + z^3) w + 2 z^2 w^2 + (-1 + z + z^3) w^3"
F2 = ("(-z^2+z^3)+(-4 z+3 z^2) w+(-z^3-9 z^4) w^2+(-2+8 z+4 z^2-4 z^3) w^3"
      "+(6-8 z^2+7 z^3+8 z^4) w^4")
F3 = "-1/2+z^2 w+(-2 z^2-z^3) w^2+(-z/2+2 z^2)w^3+(-z)w^4"
F4 = "(z^30+z^32)+(z^14+z^20) w^5+(z^5+z^9) w^9+(z+z^3) w^12+6 w^14+(2+z^2) w^15"

F1_ROWS = [
    (1, '0', [('V_2', 2), ('E', 2)], 0.65),
    (2, '-0.3582 - 0.2530 i', [('V_2', 1), ('T', 1)], 0.57),
    (3, '-0.3582 + 0.2530 i', [('V_2', 1), ('T', 1)], 0.57),
    (4, '0.1961 - 0.5259 i', [('T', 8), ('V_2', 8)], 0.56),
    (5, '0.1961 + 0.5259 i', [('T', 9), ('V_2', 9)], 0.56),
    (6, '0.6823', [('L^-1', 7), ('T', 7), ('T', 4)], 0.63),
    (7, '0.7492', [('V_2', 6), ('T', 4)], 0.52),
    (8, '-0.1440 - 0.9401 i', [('V_2', 10), ('T', 4)], 0.42),
    (9, '-0.1440 + 0.9401 i', [('V_2', 11), ('T', 5)], 0.42),
    (10, '-0.3412 - 1.1615 i', [('L^-1', 8), ('T', 8), ('T', 12)], 0.43),
    (11, '-0.3412 + 1.1615 i', [('L^-1', 9), ('T', 9), ('T', 13)], 0.43),
    (12, '-0.843 - 1.560 i', [('T', 8), ('V_2', 10)], 0.43),
    (13, '-0.843 + 1.560 i', [('T', 9), ('V_2', 11)], 0.43),
]

F2_ROWS = [
    (1, '0', [('V_2', 2), ('E', 5), ('E', 2)], 0.8),
    (2, '-0.009200', [('T', 1), ('T', 5), ('V_2', 1)], 0.57),
    (3, '-0.5975', [('T', 16), ('T', 12), ('V_2', 12)], 0.62),
    (4, '0.6326', [('V_2', 5), ('T', 5), ('T', 17)], 0.63),
    (5, '0.6929', [('T', 4), ('T', 17), ('V_2', 4)], 0.9),
    (6, '0.6447 - 0.5028 i', [('L^-1', 14), ('T', 14), ('T', 5), ('T', 17)], 0.43),
    (7, '0.6447 + 0.5028 i', [('L^-1', 15), ('T', 15), ('T', 5), ('T', 18)], 0.43),
    (8, '0.2964 - 0.7975 i', [('T', 14), ('T', 10), ('V_2', 10)], 0.43),
    (9, '0.2964 + 0.7975 i', [('T', 15), ('T', 11), ('V_2', 11)], 0.43),
    (10, '-0.0729 - 0.8528 i', [('T', 24), ('T', 8), ('V_2', 8)], 0.57),
    (11, '-0.0729 + 0.8528 i', [('T', 25), ('T', 9), ('V_2', 9)], 0.57),
    (12, '-0.8591', [('T', 16), ('T', 13), ('V_2', 3)], 0.58),
    (13, '-0.8608', [('T', 16), ('T', 12), ('T', 12), ('L^-1', 16)], 0.44),
    (14, '0.7205 - 0.4925 i', [('V_2', 6), ('T', 5), ('T', 17)], 0.42),
    (15, '0.7205 + 0.4925 i', [('V_2', 7), ('T', 5), ('T', 18)], 0.42),
    (16, '-0.9016', [('V_2', 13), ('T', 12), ('T', 12)], 0.42),
    (17, '0.8593 - 0.4299 i', [('T', 14), ('T', 19), ('V_2', 14)], 0.57),
    (18, '0.8593 + 0.4299 i', [('T', 15), ('T', 19), ('V_2', 15)], 0.57),
    (19, '0.9666', [('T', 4), ('T', 17), ('V_2', 5)], 0.57),
    (20, '-1.1628 - 0.2641 i', [('T', 22), ('T', 12), ('V_2', 22)], 1.1),
    (21, '-1.1628 + 0.2641 i', [('T', 22), ('T', 12), ('V_2', 22)], 1.1),
    (22, '-1.296', [('T', 20), ('T', 21), ('V_2', 23)], 0.43),
    (23, '-1.304', [('T', 20), ('T', 21), ('T', 22), ('L^-1', 22)], 0.44),
    (24, '0.2805 - 1.3743 i', [('V_2', 10), ('T', 8), ('T', 8)], 0.57),
    (25, '0.2805 + 1.3743 i', [('V_2', 11), ('T', 9), ('T', 9)], 0.57),
    ('inf', '', [('T', 2), ('T', 5), ('V_2', 2)], 1.1),
]

F3_ROWS = [
    (1, '0', [('P_4^-1', 2)], 0.69),
    (2, '-0.1796 - 0.3499 i', [('V_2', 1), ('T', 1), ('T', 1)], 0.3),
    (3, '-0.1796 + 0.3499 i', [('V_2', 1), ('T', 1), ('T', 1)], 0.3),
    (4, '0.6957 - 0.0167 i', [('T', 5), ('T', 5), ('V_2', 1)], 0.41),
    (5, '0.6957 + 0.0167 i', [('T', 4), ('T', 4), ('V_2', 1)], 0.41),
    (6, '-1.1392 - 0.5535 i', [('T', 2), ('T', 7), ('V_2', 2)], 0.58),
    (7, '-1.1392 + 0.5535 i', [('T', 3), ('T', 6), ('V_2', 3)], 0.58),
    (8, '0.6753 - 1.1369 i', [('T', 4), ('T', 5), ('V_2', 4)], 0.56),
    (9, '0.6753 + 1.1369 i', [('T', 5), ('T', 4), ('V_2', 5)], 0.56),
    (10, '3.152', [('V_2', 4), ('T', 4), ('T', 5)], 0.55),
    (11, '-4.832', [('T', 2), ('T', 6), ('V_2', 6)], 0.59),
    ('inf', '', [('E', 3), ('E', 2), ('P_2^-2', 2)], 0.8),
]

# origin of f1: the three series through z^(9/2)
F1_ORIGIN = {
    1: [(1, -1), (3, -1), (4, 0.5), (5, -1), (6, 1.5), (7, -1.625), (8, 1), (9, -2.625)],
    2: [(2, 1), (3, -1), (7, 4), (8, -9), (9, 9), (10, -7), (11, -12), (12, 91), (13, -222),
        (14, 337)],
    3: [(1, 1), (3, 1), (4, 0.5), (5, 1), (6, 1.5), (7, 1.625), (8, 1), (9, 2.625)],
}

# f3 at infinity: two Taylor sheets and the leading terms of the pole pair
F3_INF_E1 = [0.5, 0.25, 0.75, 1.3125, 3.0625]  # z^2 .. z^6
F3_INF_E2 = [1, -2.5, 5.75, -22.25, 76.9375]  # z .. z^5
F3_INF_P = {-2: 1, -1: -1.58114j, 0: -0.25, 1: 0.335992j, 2: -0.5}  # numerators over 2

F2_AT_10 = [-1.00362, -0.0986669, 0.101185, 1.04195]

# f4 at the origin: cycle, CLSP label, continuation radius, root test
F4_ORIGIN = [
    (1, 118, 1.094, 1.099),
    (2, 2, 0.1668, 0.1677),
    (3, 2, 0.167, 0.168),
    (4, 7, 0.505, 0.510),
    (5, 27, 0.6413, 0.6488),
]

# f4 at infinity: CLSP (relative to infinity), root test, continuation radius
F4_INF = [
    (6, 0.551442, 0.54979), (3, 0.540964, 0.538936), (2, 0.540964, 0.538936),
    (3, 0.541024, 0.538936), (2, 0.541024, 0.538936), (11, 0.561659, 0.559514),
    (10, 0.561659, 0.559514), (14, 0.573164, 0.571386), (15, 0.573164, 0.571386),
    (16, 0.581556, 0.579324), (17, 0.581556, 0.579324), (22, 0.628151, 0.622668),
    (23, 0.628151, 0.622668), (26, 0.6324, 0.629759), (27, 0.6324, 0.629759),
]
