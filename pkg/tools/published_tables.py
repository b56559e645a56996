"""Reference aggregate tables transcribed from the original study.

These are the golden targets the bundled per-field fixtures are built to
reproduce: mod-p slope distributions, mod-p^2 refinements, filtered
distributions, eligibility bookkeeping, and minimal distinguishing
precision.  Keys are (label, prime).
"""

# Non-anomalous runs: level-1 row, bound, (used, eligible), percent lost,
# and the full per-bucket second-digit refinement in bucket order.
NON_ANOMALOUS = {
    ("709.a1", 3): {
        "row": [59, 50, 61, 55], "bound": 4376, "used": 225, "eligible": 241,
        "lost": "6.6", "min_n": 10,
        "level2": [[18, 18, 23], [14, 17, 19], [19, 18, 24], [14, 18, 23]],
    },
    ("997.c1", 3): {
        "row": [70, 64, 65, 57], "bound": 4628, "used": 256, "eligible": 260,
        "lost": "1.5", "min_n": 10,
        "level2": [[22, 19, 29], [24, 20, 20], [23, 22, 20], [21, 15, 21]],
    },
    ("1627.a1", 3): {
        "row": [69, 54, 64, 54], "bound": 4691, "used": 241, "eligible": 246,
        "lost": "2.0", "min_n": 10,
        "level2": [[21, 24, 24], [23, 20, 11], [26, 21, 17], [19, 14, 21]],
    },
    ("2677.a1", 3): {
        "row": [50, 62, 52, 61], "bound": 4559, "used": 225, "eligible": 234,
        "lost": "3.8", "min_n": 11,
        "level2": [[16, 15, 19], [15, 24, 23], [14, 20, 18], [24, 18, 19]],
    },
    ("709.a1", 5): {
        "row": [48, 52, 38, 44, 43, 41], "bound": 4376, "used": 266,
        "eligible": 276, "lost": "3.6", "min_n": 7,
        "level2": [[4, 10, 12, 11, 11], [11, 12, 11, 9, 9], [6, 12, 12, 4, 4],
                   [5, 7, 6, 15, 11], [8, 8, 9, 12, 6], [8, 7, 12, 9, 5]],
    },
    ("1531.a1", 5): {
        "row": [36, 42, 46, 44, 44, 42], "bound": 4344, "used": 254,
        "eligible": 269, "lost": "5.6", "min_n": 8,
        "level2": [[9, 2, 6, 7, 12], [4, 6, 8, 12, 12], [10, 9, 9, 6, 12],
                   [5, 8, 8, 16, 7], [9, 11, 11, 7, 6], [3, 9, 9, 8, 13]],
    },
    ("1621.a1", 5): {
        "row": [43, 39, 57, 47, 49, 39], "bound": 4811, "used": 274,
        "eligible": 280, "lost": "2.1", "min_n": 7,
        "level2": [[8, 12, 13, 5, 5], [7, 6, 10, 11, 5], [15, 12, 11, 8, 11],
                   [8, 9, 12, 10, 8], [9, 10, 8, 13, 9], [9, 9, 8, 4, 9]],
    },
    ("1873.a1", 5): {
        "row": [59, 43, 43, 50, 45, 37], "bound": 4879, "used": 277,
        "eligible": 284, "lost": "2.5", "min_n": 7,
        "level2": [[16, 13, 8, 12, 10], [11, 10, 7, 11, 4], [11, 6, 7, 10, 9],
                   [9, 7, 17, 8, 9], [10, 6, 8, 12, 9], [7, 8, 7, 7, 8]],
    },
    ("1907.a1", 5): {
        "row": [43, 34, 39, 32, 34, 43], "bound": 4004, "used": 225,
        "eligible": 240, "lost": "6.3", "min_n": 8,
        "level2": [[8, 7, 10, 12, 6], [3, 1, 12, 9, 9], [3, 8, 10, 11, 7],
                   [9, 9, 5, 2, 7], [4, 4, 6, 12, 8], [7, 13, 8, 6, 9]],
    },
    ("1933.a1", 5): {
        "row": [39, 47, 36, 48, 57, 55], "bound": 4804, "used": 282,
        "eligible": 288, "lost": "2.1", "min_n": 6,
        "level2": [[7, 7, 7, 9, 9], [7, 12, 8, 9, 11], [5, 12, 5, 7, 7],
                   [9, 11, 8, 12, 8], [10, 14, 10, 9, 14], [15, 7, 10, 16, 7]],
    },
    ("643.a1", 7): {
        "row": [24, 31, 24, 29, 34, 34, 33, 26], "bound": 3827, "used": 235,
        "eligible": 248, "lost": "5.2", "min_n": 5,
        "level2": [[2, 4, 4, 3, 3, 2, 6], [2, 7, 8, 5, 3, 3, 3],
                   [3, 2, 1, 2, 3, 6, 7], [6, 2, 6, 8, 2, 3, 2],
                   [4, 6, 7, 5, 2, 7, 3], [7, 4, 8, 6, 4, 1, 4],
                   [2, 6, 9, 2, 5, 4, 5], [1, 5, 4, 7, 5, 1, 3]],
    },
    ("709.a1", 7): {
        "row": [24, 33, 40, 28, 29, 24, 33, 33], "bound": 3863, "used": 244,
        "eligible": 255, "lost": "4.3", "min_n": 5,
        "level2": [[3, 1, 7, 3, 4, 0, 6], [6, 6, 6, 3, 4, 5, 3],
                   [5, 5, 8, 3, 9, 5, 5], [5, 6, 3, 3, 2, 6, 3],
                   [6, 2, 3, 2, 6, 7, 3], [2, 8, 2, 3, 3, 3, 3],
                   [4, 5, 3, 4, 8, 5, 4], [3, 4, 3, 7, 4, 7, 5]],
    },
    ("997.c1", 7): {
        "row": [33, 27, 24, 37, 31, 22, 29, 24], "bound": 3811, "used": 227,
        "eligible": 233, "lost": "2.6", "min_n": 6,
        "level2": [[4, 3, 7, 8, 4, 3, 4], [4, 3, 4, 3, 4, 7, 2],
                   [4, 2, 3, 4, 1, 5, 5], [8, 3, 6, 5, 5, 3, 7],
                   [5, 7, 5, 2, 4, 4, 4], [5, 3, 5, 3, 1, 2, 3],
                   [3, 9, 4, 3, 3, 2, 5], [4, 5, 3, 1, 5, 3, 3]],
    },
    ("1613.a1", 7): {
        "row": [44, 41, 43, 23, 33, 25, 32, 41], "bound": 4623, "used": 282,
        "eligible": 290, "lost": "2.8", "min_n": 5,
        "level2": [[2, 5, 8, 7, 5, 10, 7], [7, 6, 4, 8, 3, 7, 6],
                   [8, 2, 5, 10, 6, 5, 7], [2, 2, 2, 2, 3, 6, 6],
                   [4, 5, 4, 8, 6, 3, 3], [0, 2, 5, 4, 5, 4, 5],
                   [10, 5, 4, 3, 1, 4, 5], [6, 2, 4, 6, 10, 6, 7]],
    },
    ("1627.a1", 7): {
        "row": [34, 41, 39, 47, 26, 33, 44, 30], "bound": 4679, "used": 294,
        "eligible": 298, "lost": "1.3", "min_n": 6,
        "level2": [[3, 8, 6, 6, 2, 4, 5], [8, 3, 8, 4, 6, 4, 8],
                   [7, 6, 7, 2, 5, 8, 4], [4, 6, 12, 5, 8, 4, 8],
                   [4, 6, 2, 4, 3, 4, 3], [4, 6, 4, 5, 4, 5, 5],
                   [6, 5, 4, 8, 8, 7, 6], [8, 2, 4, 4, 5, 2, 5]],
    },
}

# Anomalous runs: receptacle-basis level-1 row, mode (bucket index, p for
# the (1,0) slot, None for undetermined), bound, counts, filtered row,
# mode-bucket second-digit refinement, natural-line bucket, agreement.
ANOMALOUS = {
    ("433.a1", 3): {
        "row": [25, 21, 26, 208], "mode": 3, "bound": 5240, "used": 280,
        "eligible": 299, "lost": "6.4", "min_n": 8, "case": "case2",
        "mode_level2": [71, 60, 77], "filtered": [14, 18, 19, 126],
        "natural": 3, "agreement": "equal",
    },
    ("643.a1", 3): {
        "row": [25, 28, 139, 36], "mode": 2, "bound": 4520, "used": 228,
        "eligible": 239, "lost": "4.6", "min_n": 11, "case": "case2",
        "mode_level2": [42, 47, 50], "filtered": [0, 0, 102, 0],
        "natural": 2, "agreement": "equal",
    },
    ("1058.a1", 3): {
        "row": [23, 25, 20, 25], "mode": None, "bound": 8015, "used": 93,
        "eligible": 150, "lost": "38.0", "min_n": 7, "case": "case2",
        "mode_level2": None, "filtered": [0, 7, 0, 0],
        "natural": 1, "agreement": "undefined",
    },
    ("1483.a1", 3): {
        "row": [32, 147, 28, 29], "mode": 1, "bound": 4631, "used": 236,
        "eligible": 247, "lost": "4.5", "min_n": 10, "case": "case2",
        "mode_level2": [36, 61, 50], "filtered": [0, 110, 0, 0],
        "natural": 1, "agreement": "equal",
    },
    ("1613.a1", 3): {
        "row": [24, 164, 31, 50], "mode": 1, "bound": 4631, "used": 269,
        "eligible": 276, "lost": "2.5", "min_n": 10, "case": "case2",
        "mode_level2": [45, 62, 57], "filtered": [0, 133, 0, 0],
        "natural": 1, "agreement": "equal",
    },
    ("1933.a1", 3): {
        "row": [43, 24, 170, 33], "mode": 2, "bound": 4835, "used": 270,
        "eligible": 272, "lost": "0.7", "min_n": 10, "case": "case2",
        "mode_level2": [59, 57, 54], "filtered": [0, 0, 125, 0],
        "natural": 2, "agreement": "equal",
    },
    ("6293.d1", 3): {
        "row": [23, 21, 22, 46], "mode": 3, "bound": 12899, "used": 112,
        "eligible": 149, "lost": "24.8", "min_n": 7, "case": "case2",
        "mode_level2": None, "filtered": [12, 15, 17, 0],
        "natural": 0, "agreement": "different",
    },
    ("36781.b1", 3): {
        "row": [33, 24, 116, 19], "mode": 2, "bound": 3923, "used": 192,
        "eligible": 206, "lost": "6.8", "min_n": 15, "case": "case1",
        "mode_level2": [40, 34, 42], "filtered": [0, 0, 84, 0],
        "natural": 2, "agreement": "equal",
    },
    ("433.a1", 5): {
        "row": [21, 8, 13, 193, 11, 16], "mode": 3, "bound": 4631,
        "used": 262, "eligible": 272, "lost": "3.7", "min_n": 7,
        "case": "case2", "mode_level2": [38, 37, 36, 46, 36],
        "filtered": [0, 0, 0, 175, 0, 0], "natural": 3, "agreement": "equal",
    },
    ("563.a1", 5): {
        "row": [14, 17, 170, 16, 10, 8], "mode": 2, "bound": 3199,
        "used": 235, "eligible": 261, "lost": "10.0", "min_n": 8,
        "case": "case2", "mode_level2": [32, 34, 34, 37, 33],
        "filtered": [0, 0, 151, 0, 0, 0], "natural": 2, "agreement": "equal",
    },
    ("997.c1", 5): {
        "row": [10, 17, 23, 15, 192, 14], "mode": 4, "bound": 4619,
        "used": 271, "eligible": 273, "lost": "0.7", "min_n": 8,
        "case": "case2", "mode_level2": [50, 36, 35, 33, 38],
        "filtered": [0, 0, 0, 0, 166, 0], "natural": 4, "agreement": "equal",
    },
    ("6011.a1", 7): {
        "row": [13, 9, 11, 7, 226, 8, 10, 5], "mode": 4, "bound": 4591,
        "used": 289, "eligible": 298, "lost": "3.0", "min_n": 6,
        "case": "case2", "mode_level2": [24, 37, 28, 37, 41, 27, 32],
        "filtered": [0, 0, 0, 0, 213, 0, 0, 0], "natural": 4,
        "agreement": "equal",
    },
    ("2251.a1", 11): {
        "row": [2, 1, 3, 3, 2, 2, 2, 3, 181, 2, 4, 0], "mode": 8,
        "bound": 3559, "used": 205, "eligible": 235, "lost": "12.8",
        "min_n": 5, "case": "case2",
        "mode_level2": [19, 15, 14, 16, 17, 17, 11, 14, 22, 18, 18],
        "filtered": [0, 0, 0, 0, 0, 0, 0, 0, 179, 0, 0, 0],
        "natural": 8, "agreement": "equal",
    },
    ("1933.a1", 13): {
        "row": [2, 4, 2, 2, 1, 1, 1, 4, 3, 2, 1, 8, 229, 4], "mode": 12,
        "bound": 4835, "used": 264, "eligible": 275, "lost": "4.0",
        "min_n": 5, "case": "case2",
        "mode_level2": [12, 26, 20, 15, 23, 9, 21, 18, 18, 17, 18, 22, 10],
        "filtered": [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 222, 0],
        "natural": 12, "agreement": "equal",
    },
    ("709.a1", 29): {
        "row": [0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0,
                0, 0, 0, 0, 196, 0, 0, 2, 0, 0],
        "mode": 24, "bound": 3012, "used": 204, "eligible": 218,
        "lost": "6.4", "min_n": 4, "case": "case2",
        "mode_level2": [3, 13, 9, 8, 7, 7, 5, 7, 6, 6, 4, 2, 7, 7, 5, 8, 6,
                        8, 7, 7, 7, 9, 7, 3, 4, 7, 7, 12, 8],
        "filtered": [0] * 24 + [196] + [0] * 5,
        "natural": 24, "agreement": "equal",
    },
    ("1483.a1", 31): {
        "row": [1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0,
                196, 0, 0, 1, 0, 0, 2, 0, 0, 0, 0, 0],
        "mode": 20, "bound": 3080, "used": 203, "eligible": 224,
        "lost": "9.4", "min_n": 4, "case": "case2",
        "mode_level2": [7, 7, 5, 8, 7, 3, 4, 3, 7, 8, 10, 5, 8, 7, 11, 4, 9,
                        7, 3, 10, 6, 9, 3, 8, 4, 4, 3, 8, 7, 7, 4],
        "filtered": [0] * 20 + [195] + [0] * 11,
        "natural": 20, "agreement": "equal",
    },
}

# Alternate (1058.a1, 3) data set used for the filter study: 152 fields
# considered, 83 with completed slopes, filter eliminations 141 by local
# divisibility then 4 by class number, 7 survivors all in bucket 1.
FILTER_STUDY_1058 = {
    "row": [23, 25, 10, 25],
    "considered": 152,
    "with_slopes": 83,
    "eliminated_divisible": 141,
    "eliminated_class_number": 4,
    "passed": 7,
    "filtered": [0, 7, 0, 0],
}

# Sanity: refinements must resum to their level-1 buckets.
for key, data in NON_ANOMALOUS.items():
    assert sum(data["row"]) == data["used"], key
    for bucket, sub in zip(data["row"], data["level2"]):
        assert sum(sub) == bucket, (key, bucket, sub)
for key, data in ANOMALOUS.items():
    assert sum(data["row"]) == data["used"], key
    if data["mode_level2"] is not None:
        assert sum(data["mode_level2"]) == data["row"][data["mode"]], key
    assert all(f <= c for f, c in zip(data["filtered"], data["row"])), key
