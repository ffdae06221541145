"""
BRIEF 固定采样模式

256 个点对 (x1, y1, x2, y2)，坐标相对 32×32 补丁中心、取值 [-15, 15]，
由各向同性高斯 (σ=6.4) 采样并截断生成。该模式是二进制描述子格式的一部分，不可修改。
"""

BRIEF_PAIRS = (
    (-8, 3, 0, 2),
    (15, -9, 9, -2),
    (1, 6, -8, 3),
    (-1, -1, 7, -11),
    (-6, -10, 3, 2),
    (11, -5, -1, 2),
    (-5, 6, 1, -8),
    (10, -5, 3, -6),
    (-5, -4, -5, 0),
    (-2, -3, -1, -11),
    (-2, -1, 9, -14),
    (0, -8, 3, 1),
    (1, 10, 11, -5),
    (10, 5, 9, 6),
    (0, -3, 11, 13),
    (1, -2, -5, 8),
    (-8, -3, -5, -15),
    (0, 5, 2, 10),
    (8, -5, 0, -3),
    (-4, -1, 1, -5),
    (3, 3, 3, -5),
    (-2, -5, 6, 5),
    (-9, -2, -2, -3),
    (-4, -3, 8, 9),
    (8, 3, 4, 0),
    (6, 3, 1, -10),
    (-4, -3, -11, 3),
    (4, -4, 10, -5),
    (1, 3, 11, -1),
    (1, -8, -6, 0),
    (12, -5, -7, -6),
    (-2, 15, -8, -3),
    (6, -3, -5, -1),
    (-2, -1, 13, 1),
    (-8, -2, 1, -6),
    (-4, 3, -1, -11),
    (-2, -10, 0, 0),
    (6, -3, 11, 0),
    (-10, 2, 2, 1),
    (-7, -15, 2, 15),
    (-2, -6, -5, 3),
    (-5, -1, 3, 0),
    (6, 3, -6, -8),
    (-6, 11, 7, 2),
    (-8, 6, 3, 6),
    (9, 5, -4, 3),
    (-9, -10, -11, -10),
    (3, -9, 6, -8),
    (4, 10, -4, 4),
    (-3, 1, -4, 6),
    (-12, -2, -11, 6),
    (4, 0, 7, 4),
    (-5, -3, -3, -1),
    (-3, -5, 0, 4),
    (-6, -9, 2, -7),
    (2, 9, -6, -3),
    (-15, 4, 7, 11),
    (-5, -7, -6, -2),
    (5, -7, -2, 6),
    (-8, 4, -13, 6),
    (10, 12, 1, 12),
    (-3, 3, 2, -1),
    (2, 8, -6, 5),
    (-12, 0, -14, 6),
    (-6, 9, -1, -4),
    (1, 3, -10, 5),
    (4, 4, 3, -10),
    (0, -4, 2, -2),
    (1, -3, 15, 4),
    (-12, -3, -5, -2),
    (-11, -2, 6, -3),
    (9, 11, -5, 4),
    (-7, -13, 6, 0),
    (0, -12, -3, -2),
    (8, -7, -11, -7),
    (-8, -4, 11, -6),
    (-6, 5, -6, 1),
    (3, -8, -4, 13),
    (-5, 5, 2, -5),
    (1, -15, -10, 10),
    (-11, -13, 1, 5),
    (0, 10, -8, 2),
    (-3, 0, -7, 12),
    (3, 6, 2, -2),
    (12, 6, -15, 0),
    (0, -10, 5, -7),
    (-6, 1, -2, -8),
    (3, 0, -6, 1),
    (7, -1, 6, 5),
    (7, 5, 1, -6),
    (-3, -3, 10, -3),
    (1, -2, 7, 0),
    (-2, -8, 8, -4),
    (3, 2, 10, 8),
    (-2, -1, 1, -5),
    (-6, 1, -7, 1),
    (3, 1, -3, -2),
    (-6, 3, 6, 5),
    (-2, -4, 9, -1),
    (6, 4, 9, 14),
    (2, 0, 8, 4),
    (5, 4, -4, 3),
    (-6, -3, -5, -1),
    (2, -10, 2, 1),
    (14, -5, 15, -10),
    (2, -8, -1, 5),
    (4, -7, 6, 1),
    (4, -9, 15, 9),
    (10, 6, -2, -4),
    (6, -4, -5, 3),
    (4, 5, -1, -2),
    (1, -6, -10, -6),
    (6, 4, 4, 4),
    (11, -4, 0, -1),
    (-9, -7, 1, -4),
    (3, -1, 5, 14),
    (-3, -10, 5, 8),
    (1, -4, -7, 0),
    (-1, 8, 5, 7),
    (1, 7, -3, -4),
    (-1, 12, -10, 0),
    (-6, 3, 1, 2),
    (10, -5, 5, -7),
    (7, -6, -6, 7),
    (2, 5, -2, -6),
    (5, 7, 15, 2),
    (-1, 5, 7, 8),
    (10, -4, -7, 4),
    (-2, -4, -2, 3),
    (6, -6, 7, 4),
    (-5, 9, -6, -8),
    (-6, 3, 3, -1),
    (7, 4, -3, -1),
    (-9, -2, -1, -7),
    (-6, 2, -7, -5),
    (4, 3, -5, 4),
    (4, 1, 3, -8),
    (-3, -2, -14, -1),
    (-13, -8, -13, 0),
    (-9, 2, 2, -4),
    (0, 3, 2, -3),
    (-7, -12, 15, 2),
    (6, -3, -9, -1),
    (1, 3, -2, 10),
    (10, 11, 0, -4),
    (8, -1, 0, -7),
    (4, 10, 6, -4),
    (-4, 1, -1, 4),
    (4, -10, 6, 15),
    (3, 5, 5, -9),
    (-13, -1, -5, -7),
    (-1, 5, 5, 2),
    (3, -3, -11, 9),
    (0, -1, -1, 3),
    (-2, -5, 4, -4),
    (5, 9, -2, 0),
    (-7, -3, 10, -2),
    (-2, -15, 0, 0),
    (12, 3, 2, -9),
    (-1, -6, -15, -15),
    (7, -2, 1, 1),
    (8, -7, 4, 7),
    (-9, 6, 11, 7),
    (5, -2, -1, 2),
    (-4, -15, 11, -4),
    (0, -2, 1, -1),
    (2, 1, 3, 2),
    (-10, 7, 0, 2),
    (4, -3, -1, 0),
    (7, 1, 8, 1),
    (-6, -6, -4, 5),
    (15, -1, 3, 2),
    (-6, -14, 12, -5),
    (1, -2, 2, 6),
    (4, -3, 9, -4),
    (-2, -5, -3, 7),
    (-12, -2, 2, -1),
    (5, -1, 1, 1),
    (2, -5, 9, 2),
    (-3, 3, 7, 6),
    (2, 5, -6, 3),
    (-1, 7, 2, 10),
    (4, -7, 2, -4),
    (-6, -5, 4, -6),
    (4, -5, -3, 3),
    (15, 4, 9, -15),
    (-2, 8, 5, 8),
    (4, -1, 10, 5),
    (-2, -3, 2, -5),
    (-2, 6, -4, -6),
    (-12, -8, -3, 6),
    (3, 11, 11, -2),
    (3, 7, -15, 5),
    (1, -3, -3, 2),
    (1, -7, 3, -5),
    (-6, -5, -6, 2),
    (4, 1, 4, -6),
    (-10, 1, 2, 1),
    (-1, 3, -4, -3),
    (8, 12, 6, -4),
    (-3, -11, 3, 1),
    (10, 1, 3, 1),
    (3, -1, 3, 4),
    (-12, 6, 5, -9),
    (-9, 3, 6, -3),
    (2, -4, -2, 8),
    (3, 0, 13, 1),
    (6, 9, -1, 3),
    (-4, 13, 10, 5),
    (-3, -5, 11, 8),
    (11, 3, -7, 5),
    (-5, -15, -5, -5),
    (2, -1, 4, -9),
    (7, -2, -9, -1),
    (-2, -3, 1, -6),
    (-11, 10, 0, 6),
    (2, 1, 0, -4),
    (-2, 1, -14, -10),
    (-2, 3, 3, -5),
    (-9, -7, 6, 0),
    (6, -1, -1, -1),
    (8, -6, 4, -9),
    (-2, 12, -13, -6),
    (12, 0, -1, -15),
    (5, -12, 4, 10),
    (4, -6, -5, 2),
    (3, 13, -2, -5),
    (-4, 1, 10, 6),
    (-3, -7, -5, 1),
    (0, 9, 0, 0),
    (-2, 4, 0, 3),
    (-4, 6, 9, -1),
    (1, -1, -4, 5),
    (-3, -6, -5, 8),
    (2, -1, -7, -1),
    (2, -2, 12, -1),
    (-9, 15, 1, 2),
    (-8, 6, 2, -11),
    (15, -10, 2, -2),
    (3, 6, 8, -3),
    (2, -7, 0, -6),
    (3, 4, -5, -1),
    (7, 10, 4, -2),
    (9, 2, -15, -6),
    (9, 3, -5, 7),
    (9, 12, 5, 2),
    (1, 3, -2, 7),
    (-1, -2, 1, 2),
    (4, -8, 6, 3),
    (0, -3, -5, -2),
    (9, -1, 9, -7),
    (-11, 3, 2, 7),
    (-4, -3, -5, -10),
    (12, 7, 5, -2),
    (4, 1, -1, 4),
    (-2, 6, -3, 1),
)
