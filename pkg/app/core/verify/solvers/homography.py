"""
单应求解器

Hartley 归一化的 DLT（4 点最小解与最小二乘重拟合）、最小样本共线性检测，
以及前向/后向转移误差的均方根。
"""

from typing import List, Optional, Tuple

import numpy as np

COLLINEAR_EPS = 1e-3


def normalize_points(pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    平移到质心并缩放到平均距离 √2

    Returns:
        (归一化点 (N,2), 3×3 变换 T)
    """
    pts = np.asarray(pts, dtype=np.float64)
    c = pts.mean(axis=0)
    d = np.sqrt(((pts - c) ** 2).sum(axis=1)).mean()
    s = np.sqrt(2.0) / d if d > 1e-12 else 1.0
    T = np.array([[s, 0.0, -s * c[0]], [0.0, s, -s * c[1]], [0.0, 0.0, 1.0]])
    return (pts - c) * s, T


def _triangle_area(p, q, r) -> float:
    return 0.5 * abs((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))


def has_collinear_triple(pts: np.ndarray, eps: float = COLLINEAR_EPS) -> bool:
    """归一化坐标下 4 个点中是否有三点（近似）共线"""
    a, b, c, d = pts[:4]
    return min(_triangle_area(a, b, c), _triangle_area(a, b, d),
               _triangle_area(a, c, d), _triangle_area(b, c, d)) < eps


def dlt_homography(p1: np.ndarray, p2: np.ndarray) -> Optional[np.ndarray]:
    """
    归一化 DLT

    Args:
        p1: (N,2) 图1点，N ≥ 4
        p2: (N,2) 图2点

    Returns:
        3×3 单应（p2 ~ H·p1），退化时返回 None
    """
    if len(p1) < 4:
        return None
    n1, T1 = normalize_points(p1)
    n2, T2 = normalize_points(p2)
    if len(p1) == 4 and (has_collinear_triple(n1) or has_collinear_triple(n2)):
        return None
    x, y = n1[:, 0], n1[:, 1]
    u, v = n2[:, 0], n2[:, 1]
    zeros, ones = np.zeros(len(x)), np.ones(len(x))
    A = np.empty((2 * len(x), 9))
    A[0::2] = np.stack([x, y, ones, zeros, zeros, zeros, -u * x, -u * y, -u], axis=1)
    A[1::2] = np.stack([zeros, zeros, zeros, x, y, ones, -v * x, -v * y, -v], axis=1)
    _, s, Vt = np.linalg.svd(A)
    if s[min(7, len(s) - 1)] < 1e-10 * s[0]:
        return None
    Hn = Vt[-1].reshape(3, 3)
    H = np.linalg.inv(T2) @ Hn @ T1
    if not np.all(np.isfinite(H)) or abs(np.linalg.det(H)) < 1e-15 * np.linalg.norm(H) ** 3:
        return None
    return H / np.linalg.norm(H)


def homography_minimal(p1: np.ndarray, p2: np.ndarray) -> List[np.ndarray]:
    """4 点最小解，退化样本返回空列表"""
    H = dlt_homography(p1, p2)
    return [] if H is None else [H]


def _transfer(H: np.ndarray, pts: np.ndarray) -> np.ndarray:
    ph = np.c_[pts, np.ones(len(pts))] @ H.T
    with np.errstate(divide="ignore", invalid="ignore"):
        out = ph[:, :2] / ph[:, 2:3]
    out[~np.isfinite(out)] = np.inf
    return out


def homography_errors(H: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """
    对称转移误差：前向与后向转移距离的均方根（像素）

    Returns:
        (N,) 误差，映射到无穷远的点为 inf
    """
    try:
        H_inv = np.linalg.inv(H)
    except np.linalg.LinAlgError:
        return np.full(len(p1), np.inf)
    forward = np.linalg.norm(_transfer(H, p1) - p2, axis=1)
    backward = np.linalg.norm(_transfer(H_inv, p2) - p1, axis=1)
    with np.errstate(invalid="ignore", over="ignore"):
        err = np.sqrt(0.5 * (forward ** 2 + backward ** 2))
    err[~np.isfinite(err)] = np.inf
    return err
