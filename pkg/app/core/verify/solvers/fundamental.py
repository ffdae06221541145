"""
基础矩阵求解器

归一化 7 点法（det(αF1 + (1-α)F2) = 0 的三次方程）作为最小解，
归一化 8 点法做局部优化重拟合，Sampson 距离作为内点误差。
"""

from typing import List, Optional

import numpy as np

from app.core.verify.solvers.homography import normalize_points


def _epipolar_rows(n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
    x1, y1 = n1[:, 0], n1[:, 1]
    x2, y2 = n2[:, 0], n2[:, 1]
    return np.stack([x2 * x1, x2 * y1, x2, y2 * x1, y2 * y1, y2, x1, y1, np.ones(len(x1))], axis=1)


def enforce_rank2(F: np.ndarray) -> np.ndarray:
    U, s, Vt = np.linalg.svd(F)
    s[2] = 0.0
    return U @ np.diag(s) @ Vt


def _denormalize(Fn: np.ndarray, T1: np.ndarray, T2: np.ndarray) -> Optional[np.ndarray]:
    F = T2.T @ Fn @ T1
    norm = np.linalg.norm(F)
    if not np.isfinite(norm) or norm < 1e-15:
        return None
    return F / norm


def seven_point(p1: np.ndarray, p2: np.ndarray) -> List[np.ndarray]:
    """
    7 点最小解

    Args:
        p1: (7,2) 图1点
        p2: (7,2) 图2点

    Returns:
        1 到 3 个秩 2 的基础矩阵（vᵀFu = 0）
    """
    n1, T1 = normalize_points(p1)
    n2, T2 = normalize_points(p2)
    A = _epipolar_rows(n1, n2)
    _, s, Vt = np.linalg.svd(A)
    if s[6] < 1e-10 * s[0]:
        return []
    F1 = Vt[-1].reshape(3, 3)
    F2 = Vt[-2].reshape(3, 3)

    alphas = np.array([0.0, 1.0, -1.0, 2.0])
    dets = [np.linalg.det(a * F1 + (1.0 - a) * F2) for a in alphas]
    coeffs = np.polyfit(alphas, dets, 3)
    if np.all(np.abs(coeffs) < 1e-15):
        candidates = [F1]
    else:
        roots = np.roots(coeffs)
        real = roots[np.abs(roots.imag) <= 1e-9 * np.maximum(1.0, np.abs(roots.real))].real
        candidates = [a * F1 + (1.0 - a) * F2 for a in real]
        if not candidates:
            candidates = [F1]

    models = []
    for Fn in candidates:
        F = _denormalize(enforce_rank2(Fn), T1, T2)
        if F is not None:
            models.append(F)
    return models


def eight_point(p1: np.ndarray, p2: np.ndarray) -> Optional[np.ndarray]:
    """≥ 8 点最小二乘解（秩 2），退化时返回 None"""
    if len(p1) < 8:
        return None
    n1, T1 = normalize_points(p1)
    n2, T2 = normalize_points(p2)
    A = _epipolar_rows(n1, n2)
    _, s, Vt = np.linalg.svd(A)
    if s[7] < 1e-10 * s[0]:
        return None
    return _denormalize(enforce_rank2(Vt[-1].reshape(3, 3)), T1, T2)


def sampson_errors(F: np.ndarray, p1: np.ndarray, p2: np.ndarray) -> np.ndarray:
    """
    Sampson 距离（像素）

    Returns:
        (N,) 误差
    """
    x1 = np.c_[p1, np.ones(len(p1))]
    x2 = np.c_[p2, np.ones(len(p2))]
    Fx1 = x1 @ F.T
    Ftx2 = x2 @ F
    num = np.sum(x2 * Fx1, axis=1) ** 2
    den = Fx1[:, 0] ** 2 + Fx1[:, 1] ** 2 + Ftx2[:, 0] ** 2 + Ftx2[:, 1] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        err = np.sqrt(num / den)
    err[~np.isfinite(err)] = np.inf
    return err
