"""Frozen expected replacement states for the feng family, one list of six
per member index, as unnormalized (coefficient-index, coefficient) pairs for
the two local factors. Matching is up to normalization and global phase."""

EXPECTED_REPLACEMENTS = [
    [  # index 0
        ([(0, 1)], [(0, 1)]),
        ([(0, 1), (1, 1), (3, -1)], [(0, 1), (2, 1)]),
        ([(0, 1), (1, -1)], [(0, 1), (1, 1), (3, -1)]),
        ([(0, 1), (1, -1), (2, 1)], [(0, 1), (1, -1), (2, 1)]),
        ([(0, 1), (2, 1)], [(0, 1), (2, -1), (3, 1)]),
        ([(0, 1), (2, -1), (3, 1)], [(0, 1), (1, -1)]),
    ],
    [  # index 1
        ([(1, 1)], [(0, 1), (2, -1), (3, 1)]),
        ([(0, 1), (1, 1), (3, -1)], [(2, 1)]),
        ([(0, 1), (1, 1)], [(3, 1)]),
        ([(0, 1), (1, -1), (2, 1)], [(1, 1), (2, -2), (3, 1)]),
        ([(1, 1), (2, 1), (3, 1)], [(0, 1), (1, -1), (2, -2)]),
        ([(1, 1), (3, -1)], [(0, 1)]),
    ],
    [  # index 2
        ([(2, 1)], [(0, 1), (1, 1), (3, -1)]),
        ([(0, 1), (2, -1), (3, 1)], [(1, 1)]),
        ([(2, 1), (3, -1)], [(0, 1)]),
        ([(1, 1), (2, 1), (3, 1)], [(0, 1), (1, 2), (2, 1)]),
        ([(0, 1), (1, -1), (2, 1)], [(1, 2), (2, -1), (3, -1)]),
        ([(0, 1), (2, -1)], [(3, 1)]),
    ],
    [  # index 3
        ([(3, 1)], [(3, 1)]),
        ([(0, 1), (1, 1), (3, -1)], [(2, 1), (3, 1)]),
        ([(1, 1), (3, 1)], [(0, 1), (1, 1), (3, -1)]),
        ([(2, 1), (3, 1)], [(0, 1), (2, -1), (3, 1)]),
        ([(1, 1), (2, 1), (3, 1)], [(1, 1), (2, 1), (3, 1)]),
        ([(0, 1), (2, -1), (3, 1)], [(1, 1), (3, 1)]),
    ],
    [  # index 4
        ([(1, 1), (2, 1), (3, 1)], [(0, 1), (1, -1), (2, 1)]),
        ([(1, 1)], [(0, 2), (2, 1), (3, -1)]),
        ([(3, 1)], [(0, 1)]),
        ([(0, 1), (2, -1), (3, -2)], [(2, 1)]),
        ([(2, 1)], [(0, 2), (1, -1), (3, 1)]),
        ([(0, 1), (1, 1), (3, 2)], [(1, 1)]),
    ],
    [  # index 5
        ([(0, 1), (2, -1), (3, 1)], [(2, 1)]),
        ([(3, 1)], [(0, 1), (2, -1)]),
        ([(0, 1)], [(2, 1), (3, -1)]),
        ([(0, 1), (1, -1), (2, -2)], [(1, 1), (2, 1), (3, 1)]),
        ([(2, 1)], [(0, 1), (2, -1), (3, 1)]),
        ([(1, 1), (2, -2), (3, 1)], [(0, 1), (1, -1), (2, 1)]),
    ],
    [  # index 6
        ([(0, 1), (1, 1), (3, -1)], [(1, 1)]),
        ([(0, 1)], [(1, 1), (3, -1)]),
        ([(1, 1)], [(0, 1), (1, 1), (3, -1)]),
        ([(0, 1), (1, 2), (2, 1)], [(1, 1), (2, 1), (3, 1)]),
        ([(1, 2), (2, -1), (3, -1)], [(0, 1), (1, -1), (2, 1)]),
        ([(3, 1)], [(0, 1), (1, 1)]),
    ],
    [  # index 7
        ([(0, 1), (1, -1), (2, 1)], [(1, 1), (2, 1), (3, 1)]),
        ([(1, 1)], [(0, 1), (2, -1), (3, -2)]),
        ([(0, 2), (1, -1), (3, 1)], [(1, 1)]),
        ([(0, 1)], [(3, 1)]),
        ([(0, 2), (2, 1), (3, -1)], [(2, 1)]),
        ([(2, 1)], [(0, 1), (1, 1), (3, 2)]),
    ],
]
