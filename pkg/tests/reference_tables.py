"""Worked-example data for the 16-site allocation: the initial population
(plans and rounded reference costs), its teacher-phase update and the
reference fitness columns."""

import numpy as np

# 8-position plans only; the others in the listing have 7 or 9 entries
PLANS = {
    1: (1, 1, 2, 2, 2, 3, 5, 3),
    3: (6, 7, 8, 11, 16, 6, 8, 9),
    4: (10, 11, 11, 15, 16, 11, 16, 14),
    5: (8, 8, 10, 14, 16, 11, 11, 14),
    6: (15, 12, 13, 11, 15, 15, 11, 12),
    7: (1, 2, 5, 7, 2, 4, 6, 8),
    8: (3, 5, 7, 8, 15, 3, 5, 3),
    11: (8, 8, 16, 14, 16, 15, 16, 14),
    12: (3, 7, 7, 8, 16, 7, 16, 3),
    14: (1, 1, 8, 8, 2, 7, 8, 8),
    16: (5, 16, 15, 15, 16, 6, 8, 9),
    17: (1, 1, 1, 1, 15, 15, 16, 14),
    18: (10, 11, 11, 8, 7, 3, 5, 3),
    20: (1, 1, 8, 8, 1, 7, 8, 8),
}

# qac, qlc, lpc, fitness
INITIAL = np.array([
    [0.7188, 0.5354, 0.2667, 0.8744],
    [0.8438, 0.6691, 0.3466, 1.2797],
    [0.8125, 0.5374, 0.3878, 1.0994],
    [0.7500, 0.4315, 0.3853, 0.8971],
    [0.7813, 0.6691, 0.3724, 1.1967],
    [0.7188, 0.6691, 0.2615, 1.0327],
    [0.8438, 0.6691, 0.4651, 1.3760],
    [0.7500, 0.6691, 0.3337, 1.1215],
    [0.5313, 0.3130, 0.1430, 0.4007],
    [0.8125, 0.6691, 0.3517, 1.2316],
    [0.7188, 0.5215, 0.2899, 0.8726],
    [0.7188, 0.4315, 0.3054, 0.7960],
    [0.5625, 0.3130, 0.1945, 0.4522],
    [0.6563, 0.3091, 0.2925, 0.6117],
    [0.4063, 0.0867, 0.2100, 0.2167],
    [0.8125, 0.5513, 0.4007, 1.1247],
    [0.6563, 0.3289, 0.2667, 0.6100],
    [0.8125, 0.5023, 0.4136, 1.0835],
    [0.5313, 0.4090, 0.1430, 0.4700],
    [0.5938, 0.3091, 0.1688, 0.4765],
])

# after the teacher phase: qac, qlc, lpc, fitness
UPDATED = np.array([
    [0.1281, -0.2506, 0.0868, 0.0868],
    [0.2531, -0.1169, 0.1667, 0.1055],
    [0.2219, -0.2486, 0.2079, 0.1543],
    [0.1594, -0.3545, 0.2054, 0.1933],
    [0.1906, -0.1169, 0.1925, 0.0871],
    [0.1281, -0.1169, 0.0816, 0.0368],
    [0.2531, -0.1169, 0.2853, 0.1591],
    [0.1594, -0.1169, 0.1538, 0.0627],
    [-0.0594, -0.4730, -0.0369, 0.2286],
    [0.2219, -0.1169, 0.1719, 0.0924],
    [0.1281, -0.2645, 0.1100, 0.0985],
    [0.1281, -0.3545, 0.1255, 0.1579],
    [-0.0281, -0.4730, 0.0146, 0.2247],
    [0.0656, -0.4770, 0.1126, 0.2445],
    [-0.1844, -0.6993, 0.0301, 0.5240],
    [0.2219, -0.2348, 0.2208, 0.1531],
    [0.0656, -0.4571, 0.0868, 0.2208],
    [0.2219, -0.2837, 0.2337, 0.1843],
    [-0.0594, -0.3770, -0.0369, 0.1470],
    [0.0031, -0.4770, -0.0111, 0.2276],
])

MEAN = np.array([0.7015, 0.4797, 0.2999])
DIFFERENCE = np.array([-0.5906, -0.7860, -0.1799])
R_BACKSOLVED = np.array([0.5926, 0.9006, 0.4615])
TEACHER = 15
