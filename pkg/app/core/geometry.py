"""
几何计算模块

仿射矩阵的 λ·R1(ψ)·T_t·R2(φ) 分解、纬度与倾斜、过渡倾斜、对称极线误差、
转台真值基础矩阵，以及 3×3 模型的归一化。所有函数都是纯函数，可在任意线程中调用。
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Sequence

import numpy as np

from app.core.errors import (
    DegenerateJacobian,
    DegenerateMotion,
    DomainError,
    MirrorMatrix,
    SingularMatrix,
    ZeroLine,
)

TWO_PI = 2.0 * math.pi


class ModelKind(str, Enum):
    """几何模型类型"""
    HOMOGRAPHY = "Homography"
    FUNDAMENTAL = "Fundamental"


@dataclass(frozen=True)
class AffineDecomposition:
    """
    仿射矩阵分解结果 A = λ·R1(ψ)·diag(t, 1)·R2(φ)

    lam 对应 λ（Python 中 lambda 为关键字）。
    """
    lam: float
    psi: float
    tilt: float
    phi: float
    latitude: float

    def compose(self) -> np.ndarray:
        """重新合成 2×2 矩阵"""
        return compose_affine(self.lam, self.psi, self.tilt, self.phi)


@dataclass
class GeometryModel:
    """单应或基础矩阵，带内点索引与逐内点残差（像素）"""
    kind: ModelKind
    matrix: np.ndarray
    inliers: List[int] = field(default_factory=list)
    residuals: List[float] = field(default_factory=list)

    def row_major(self) -> List[float]:
        """按行展开的 9 个数"""
        return [float(v) for v in np.asarray(self.matrix, dtype=float).reshape(-1)]


@dataclass(frozen=True)
class TurntableCamera:
    """转台数据集相机参数（焦距、焦平面分辨率、传感器尺寸、物距、视角差）"""
    f: float
    FR_X: float
    FR_Y: float
    m: float
    n: float
    r: float
    phi: float

    def intrinsics(self) -> np.ndarray:
        """按 K = [[m·f/FR_X, 0, m/2], [0, n·f/FR_Y, n/2], [0, 0, 1]] 组装内参"""
        return np.array([
            [self.m * self.f / self.FR_X, 0.0, self.m / 2.0],
            [0.0, self.n * self.f / self.FR_Y, self.n / 2.0],
            [0.0, 0.0, 1.0],
        ])


def rotation2d(angle: float) -> np.ndarray:
    """二维旋转矩阵"""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def compose_affine(lam: float, psi: float, tilt: float, phi: float) -> np.ndarray:
    """
    由 (λ, ψ, t, φ) 合成 2×2 仿射矩阵

    Args:
        lam: 尺度 λ > 0
        psi: 相机滚转 ψ（弧度）
        tilt: 绝对倾斜 t ≥ 1
        phi: 经度 φ（弧度）

    Returns:
        2×2 矩阵
    """
    return lam * rotation2d(psi) @ np.diag([tilt, 1.0]) @ rotation2d(phi)


def decompose_affine(A: np.ndarray) -> AffineDecomposition:
    """
    SVD 分解 A = U·Σ·Vᵀ，把符号折叠到 det(U) = det(V) = +1，
    t = σ1/σ2，λ = σ2，并把 φ 规范到 [0, π)

    Args:
        A: 2×2 非奇异、行列式为正的矩阵

    Returns:
        AffineDecomposition

    Raises:
        SingularMatrix: |det(A)| < 1e-12
        MirrorMatrix: det(A) < 0
    """
    A = np.asarray(A, dtype=float).reshape(2, 2)
    det = float(np.linalg.det(A))
    if abs(det) < 1e-12:
        raise SingularMatrix(f"仿射矩阵奇异: det={det:.3e}")
    if det < 0:
        raise MirrorMatrix(f"仿射矩阵包含镜像: det={det:.3e}")

    U, s, Vt = np.linalg.svd(A)
    if np.linalg.det(U) < 0:
        # det(A) > 0 时 U 与 Vᵀ 的行列式同号，同时翻转第二个奇异向量
        U[:, 1] *= -1.0
        Vt[1, :] *= -1.0

    lam = float(s[1])
    tilt = float(s[0] / s[1])
    psi = math.atan2(U[1, 0], U[0, 0]) % TWO_PI
    phi = math.atan2(Vt[1, 0], Vt[0, 0]) % TWO_PI

    # diag(t,1) 与 R(π) = -I 可交换
    if phi >= math.pi - 1e-12:
        phi = max(phi - math.pi, 0.0)
        psi = (psi + math.pi) % TWO_PI

    if tilt <= 1.0 + 1e-12:
        # t = 1 时 φ 不可辨识，约定 φ = 0
        tilt = 1.0
        psi = (psi + phi) % TWO_PI
        phi = 0.0

    if psi >= TWO_PI - 1e-12:
        psi = 0.0
    return AffineDecomposition(lam=lam, psi=psi, tilt=tilt, phi=phi, latitude=math.acos(1.0 / tilt))


def latitude_of_tilt(t: float) -> float:
    """
    纬度 θ = arccos(1/t)

    Raises:
        DomainError: t < 1
    """
    if t < 1.0:
        raise DomainError(f"倾斜必须 ≥ 1，得到 {t}")
    return math.acos(1.0 / t)


def tilt_of_latitude(theta: float) -> float:
    """t = 1/cos θ，θ ∈ [0, π/2)"""
    if not 0.0 <= theta < math.pi / 2.0:
        raise DomainError(f"纬度必须在 [0, π/2) 内，得到 {theta}")
    return 1.0 / math.cos(theta)


def homography_jacobian(H: np.ndarray, p: Sequence[float]) -> np.ndarray:
    """单应在点 p 处的 2×2 雅可比矩阵"""
    H = np.asarray(H, dtype=float)
    x, y = float(p[0]), float(p[1])
    h = H @ np.array([x, y, 1.0])
    w = h[2]
    if abs(w) < 1e-12:
        raise DegenerateJacobian(f"点 ({x}, {y}) 被映射到无穷远")
    return (H[:2, :2] - np.outer(h[:2] / w, H[2, :2])) / w


def transition_tilt(H: np.ndarray, p: Sequence[float]) -> float:
    """
    过渡倾斜 τ：单应在 p 处线性化后的倾斜

    Args:
        H: 3×3 单应
        p: 图像点 (x, y)

    Returns:
        τ ≥ 1

    Raises:
        DegenerateJacobian: 雅可比奇异或点映射到无穷远
    """
    J = homography_jacobian(H, p)
    s = np.linalg.svd(J, compute_uv=False)
    if s[1] < 1e-12 * max(s[0], 1.0):
        raise DegenerateJacobian("雅可比矩阵奇异")
    return float(s[0] / s[1])


def _homogeneous(point: Sequence[float]) -> np.ndarray:
    point = np.asarray(point, dtype=float).reshape(-1)
    if point.size == 2:
        return np.array([point[0], point[1], 1.0])
    return point / point[2]


def sym_epipolar_error(F: np.ndarray, u: Sequence[float], v: Sequence[float]) -> float:
    """
    对称极线误差 (vᵀFu)²·(1/((Fu)₁²+(Fu)₂²) + 1/((Fᵀv)₁²+(Fᵀv)₂²))，单位像素²

    Args:
        F: 3×3 基础矩阵（秩 2）
        u: 图1中的点
        v: 图2中的点

    Raises:
        ZeroLine: 两条极线的前两个分量都为零
    """
    F = np.asarray(F, dtype=float)
    u = _homogeneous(u)
    v = _homogeneous(v)
    Fu = F @ u
    Ftv = F.T @ v
    d1 = Fu[0] ** 2 + Fu[1] ** 2
    d2 = Ftv[0] ** 2 + Ftv[1] ** 2
    if d1 == 0.0 and d2 == 0.0:
        raise ZeroLine("两条极线均退化")
    num = float(v @ Fu) ** 2
    if num == 0.0:
        return 0.0
    total = 0.0
    for d in (d1, d2):
        total += num / d if d > 0.0 else math.inf
    return total


def sym_epipolar_errors(F: np.ndarray, pts1: np.ndarray, pts2: np.ndarray) -> np.ndarray:
    """sym_epipolar_error 的批量版本，退化极线返回 inf"""
    F = np.asarray(F, dtype=float)
    x1 = np.c_[pts1, np.ones(len(pts1))]
    x2 = np.c_[pts2, np.ones(len(pts2))]
    Fu = x1 @ F.T
    Ftv = x2 @ F
    num = np.sum(x2 * Fu, axis=1) ** 2
    d1 = Fu[:, 0] ** 2 + Fu[:, 1] ** 2
    d2 = Ftv[:, 0] ** 2 + Ftv[:, 1] ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        err = num / d1 + num / d2
    err[num == 0.0] = 0.0
    return err


def normalize_model(M: np.ndarray, kind: ModelKind = ModelKind.HOMOGRAPHY) -> np.ndarray:
    """
    3×3 模型归一化到单位 Frobenius 范数，最大绝对值元素取正号；
    基础矩阵先强制秩 2

    Args:
        M: 3×3 矩阵
        kind: 模型类型

    Returns:
        归一化后的矩阵
    """
    M = np.asarray(M, dtype=float).reshape(3, 3).copy()
    if kind == ModelKind.FUNDAMENTAL:
        U, s, Vt = np.linalg.svd(M)
        s[2] = 0.0
        M = U @ np.diag(s) @ Vt
    norm = np.linalg.norm(M)
    if norm == 0.0:
        raise SingularMatrix("零矩阵无法归一化")
    M = M / norm
    if M.flat[int(np.argmax(np.abs(M)))] < 0:
        M = -M
    return M


def skew(v: Sequence[float]) -> np.ndarray:
    """叉乘矩阵 [v]ₓ"""
    x, y, z = (float(c) for c in v)
    return np.array([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])


def turntable_fundamental(cam: TurntableCamera) -> GeometryModel:
    """
    转台真值基础矩阵 F = K⁻ᵀ·R·Kᵀ·[K·Rᵀ·t]ₓ

    Args:
        cam: 转台相机参数

    Returns:
        kind=Fundamental 的 GeometryModel（秩 2，单位范数）

    Raises:
        DegenerateMotion: φ ≡ 0 导致零平移
    """
    for name in ("f", "FR_X", "FR_Y", "m", "n", "r"):
        if getattr(cam, name) <= 0:
            raise DomainError(f"相机参数 {name} 必须为正")
    phi = cam.phi
    t = cam.r * np.array([math.sin(phi), 0.0, 1.0 - math.cos(phi)])
    if np.linalg.norm(t) <= 1e-12 * cam.r:
        raise DegenerateMotion("视角差为零，平移为零")
    R = np.array([
        [math.cos(phi), 0.0, -math.sin(phi)],
        [0.0, 1.0, 0.0],
        [math.sin(phi), 0.0, math.cos(phi)],
    ])
    K = cam.intrinsics()
    F = np.linalg.inv(K).T @ R @ K.T @ skew(K @ R.T @ t)
    return GeometryModel(kind=ModelKind.FUNDAMENTAL, matrix=normalize_model(F, ModelKind.FUNDAMENTAL))


# ------------------------------
# 2×3 仿射映射工具
# ------------------------------
def to_homogeneous_affine(M: np.ndarray) -> np.ndarray:
    """2×3 仿射映射扩展为 3×3"""
    out = np.eye(3)
    out[:2, :] = np.asarray(M, dtype=float).reshape(2, 3)
    return out


def invert_affine(M: np.ndarray) -> np.ndarray:
    """2×3 仿射映射求逆"""
    return np.linalg.inv(to_homogeneous_affine(M))[:2, :]


def compose_affine_maps(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """先 inner 后 outer 的 2×3 仿射映射复合"""
    return (to_homogeneous_affine(outer) @ to_homogeneous_affine(inner))[:2, :]


def apply_affine(M: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """对 (N,2) 点集应用 2×3 仿射映射"""
    M = np.asarray(M, dtype=float).reshape(2, 3)
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    return pts @ M[:, :2].T + M[:, 2]
