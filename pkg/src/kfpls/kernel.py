"""Kernel evaluation and centered Gram matrices between functional samples."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, StructuralError
from .fdata import (
    FunctionalDataset,
    FunctionalSample,
    inner_product,
    pairwise_inner_products,
    pairwise_sq_distances,
    sq_l2_distance,
)

FAMILIES = ("gaussian", "linear")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and Gaussian bandwidth ``gamma``.

    ``gamma`` is ignored by the linear family.
    """

    family: str = "gaussian"
    gamma: float = 1.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown kernel family {self.family!r}; expected one of {FAMILIES}")
        if self.family == "gaussian":
            g = float(self.gamma)
            if not (math.isfinite(g) and g > 0):
                raise ConfigError(f"gaussian kernel needs a finite gamma > 0, got {self.gamma!r}")
            object.__setattr__(self, "gamma", g)


@dataclass(frozen=True, eq=False)
class GramBundle:
    raw: np.ndarray
    centered: np.ndarray


@dataclass(frozen=True, eq=False)
class CrossGram:
    raw: np.ndarray
    centered: np.ndarray


def kernel_value(a: FunctionalSample, b: FunctionalSample, spec: KernelSpec) -> float:
    if spec.family == "gaussian":
        return math.exp(-spec.gamma * sq_l2_distance(a, b))
    return inner_product(a, b)


def base_matrix(a: FunctionalDataset, b: FunctionalDataset | None, spec: KernelSpec) -> np.ndarray:
    """The gamma-free ingredient of the kernel: squared distances for the
    Gaussian family, inner products for the linear one."""
    if spec.family == "gaussian":
        return pairwise_sq_distances(a, b)
    return pairwise_inner_products(a, b)


def kernel_from_base(base: np.ndarray, spec: KernelSpec) -> np.ndarray:
    if spec.family == "gaussian":
        return np.exp(-spec.gamma * base)
    return np.array(base, dtype=float)


def center_gram(K: np.ndarray) -> np.ndarray:
    """Double centering ``C K C`` with ``C = I - 11'/n``."""
    K = np.asarray(K, dtype=float)
    row = K.mean(axis=1, keepdims=True)
    col = K.mean(axis=0, keepdims=True)
    Kc = K - row - col + K.mean()
    return (Kc + Kc.T) / 2


def center_cross_gram(K0: np.ndarray, K: np.ndarray) -> np.ndarray:
    """Center test-by-train kernel rows against the training Gram ``K``.

    Each row of ``K0`` has the column means of ``K`` subtracted, then the
    result is right-multiplied by the centering projector.
    """
    K0 = np.asarray(K0, dtype=float)
    K = np.asarray(K, dtype=float)
    if K0.ndim != 2 or K0.shape[1] != K.shape[0]:
        raise StructuralError(f"cross Gram of shape {K0.shape} does not match a {K.shape} Gram")
    A = K0 - K.mean(axis=0)[None, :]
    return A - A.mean(axis=1, keepdims=True)


def gram_from_raw(K: np.ndarray) -> GramBundle:
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise StructuralError("Gram matrix must be square")
    if K.shape[0] < 2:
        raise ConfigError("centering needs at least 2 training samples")
    K = (K + K.T) / 2
    Kc = center_gram(K)
    K.setflags(write=False)
    Kc.setflags(write=False)
    return GramBundle(K, Kc)


def gram(ds: FunctionalDataset, spec: KernelSpec) -> GramBundle:
    if len(ds) < 2:
        raise ConfigError("centering needs at least 2 training samples")
    return gram_from_raw(kernel_from_base(base_matrix(ds, None, spec), spec))


def cross_gram(
    new_samples: FunctionalDataset,
    train: FunctionalDataset,
    spec: KernelSpec,
    train_raw: np.ndarray,
) -> CrossGram:
    train_raw = np.asarray(train_raw)
    if train_raw.shape != (len(train), len(train)):
        raise StructuralError(
            f"training Gram has shape {train_raw.shape}, expected {(len(train), len(train))}"
        )
    K0 = kernel_from_base(base_matrix(new_samples, train, spec), spec)
    K0c = center_cross_gram(K0, train_raw)
    K0.setflags(write=False)
    K0c.setflags(write=False)
    return CrossGram(K0, K0c)
