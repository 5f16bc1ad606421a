"""The five contour models as force fields over one evolution engine.

Every model turns the current level set into a rate field dphi/dt:

* ``cv``       global region means, force gated by the smoothed impulse
* ``lbf``      local binary fitting via Gaussian-kernel weighted residuals
* ``lif``      local fitted image from hard-indicator window means
* ``sdrel``    edge-gated global intensity + global saliency means
* ``proposed`` local saliency fitting combined with local image fitting,
               plus contour-length and distance-regularizing forces

``evolve`` integrates phi explicitly (phi += dt * force) until the number
of sign flips stagnates or the iteration budget runs out. Color-capable
models (``sdrel``, ``proposed``) accept an (H, W, 3) Lab raster; the pairwise
difference factors are then replaced by per-pixel Euclidean channel norms.
"""

from __future__ import annotations

import json
import time
import warnings
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .levelset import curvature, dirac, heaviside, laplacian, mask_from_phi
from .raster import convolve2d, gaussian_kernel, truncated_window

__all__ = [
    "MODEL_IDS",
    "ModelParams",
    "EvolutionTrace",
    "EvolutionAborted",
    "DegenerateRegionWarning",
    "region_means_global",
    "cv_force",
    "lbf_fits",
    "lbf_force",
    "local_means_window",
    "fitted_image",
    "lif_force",
    "edge_indicator",
    "sdrel_force",
    "proposed_force",
    "compute_force",
    "evolve",
]

MODEL_IDS = ("cv", "lbf", "lif", "sdrel", "proposed")
SALIENCY_MODELS = ("sdrel", "proposed")

DENOM_FLOOR = 1e-10


class DegenerateRegionWarning(UserWarning):
    """One of the two regions carries (numerically) no mass."""


class EvolutionAborted(RuntimeError):
    """The level set left the finite range during evolution."""

    def __init__(self, iteration: int, max_force: float):
        self.iteration = iteration
        self.max_force = max_force
        super().__init__(
            f"non-finite level set at iteration {iteration} (max |force| = {max_force:.3g})"
        )


@dataclass
class ModelParams:
    """All evolution tunables; defaults follow the reference parameter set."""

    dt: float = 0.1
    p: float = 2.0
    eps: float = 1.5
    mu: float = 1.0
    nu: float = 0.001 * 255.0 * 255.0
    sigma_s: float = 3.5
    sigma_m: float = 3.0
    lambda1: float = 1.0
    lambda2: float = 1.0
    alpha1: float = 1.0
    alpha2: float = 1.0
    sigma_lbf: float = 3.0
    nu_cv: float = 0.0
    max_iters: int = 1000
    tol: float = 1e-4

    def __post_init__(self):
        if self.dt <= 0 or self.eps <= 0 or self.p <= 0:
            raise ValueError("dt, eps and p must be > 0")
        if self.mu < 0 or self.nu < 0:
            raise ValueError("mu and nu must be >= 0")
        if self.sigma_s <= 1 or self.sigma_m <= 1:
            raise ValueError("sigma_s and sigma_m must be > 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ValueError(
                f"unknown parameter(s) {sorted(unknown)}; valid: {sorted(known)}"
            )
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))

    def updated(self, **kwargs) -> "ModelParams":
        return replace(self, **kwargs)


def _as_gray(img):
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"this model needs a single-channel raster, got {img.shape}")
    return img


def _channels(img):
    # (H, W) -> [plane], (H, W, C) -> per-channel planes
    img = np.asarray(img, dtype=np.float64)
    if img.ndim == 2:
        return [img]
    return [img[:, :, c] for c in range(img.shape[2])]


def _regularizers(phi, params):
    kappa = curvature(phi)
    out = params.mu * (laplacian(phi) - kappa)
    if params.nu != 0:
        out = out + params.nu * dirac(phi, params.eps) * kappa
    return out


def region_means_global(img, phi, eps: float):
    """Mean intensity inside (c1) and outside (c2), weighted by the smoothed step."""
    img = _as_gray(img)
    h = heaviside(phi, eps)
    d1, d2 = h.sum(), (1.0 - h).sum()
    if d1 < DENOM_FLOOR or d2 < DENOM_FLOOR:
        warnings.warn(
            "level set saturated to one side; region mean is degenerate",
            DegenerateRegionWarning,
            stacklevel=2,
        )
    c1 = (img * h).sum() / max(d1, DENOM_FLOOR)
    c2 = (img * (1.0 - h)).sum() / max(d2, DENOM_FLOOR)
    return c1, c2


def cv_force(img, phi, params: ModelParams):
    """Global two-phase force gated by the smoothed impulse.

    dirac(phi) * (-l1 (I-c1)^2 + l2 (I-c2)^2 + mu * curvature - nu_cv)
    """
    img = _as_gray(img)
    c1, c2 = region_means_global(img, phi, params.eps)
    bracket = -params.lambda1 * (img - c1) ** 2 + params.lambda2 * (img - c2) ** 2
    if params.mu != 0:
        bracket = bracket + params.mu * curvature(phi)
    if params.nu_cv != 0:
        bracket = bracket - params.nu_cv
    return dirac(phi, params.eps) * bracket


def _lbf_kernel(params):
    return gaussian_kernel(params.sigma_lbf, 4 * int(np.floor(params.sigma_lbf)) + 1)


def lbf_fits(img, phi, params: ModelParams):
    """Kernel-weighted local fits inside (f1) and outside (f2) the contour."""
    img = _as_gray(img)
    kernel = _lbf_kernel(params)
    h = heaviside(phi, params.eps)
    f1 = convolve2d(h * img, kernel) / np.maximum(convolve2d(h, kernel), DENOM_FLOOR)
    f2 = convolve2d((1.0 - h) * img, kernel) / np.maximum(
        convolve2d(1.0 - h, kernel), DENOM_FLOOR
    )
    return f1, f2


def lbf_force(img, phi, params: ModelParams):
    """Local binary fitting force with length and distance regularizers.

    The kernel-weighted squared residual e_i(x) = sum_y K(x-y) (I(x)-f_i(y))^2
    is expanded into three convolutions: I^2 (K*1) - 2 I (K*f) + K*(f^2).
    """
    img = _as_gray(img)
    kernel = _lbf_kernel(params)
    f1, f2 = lbf_fits(img, phi, params)
    k_one = convolve2d(np.ones_like(img), kernel)
    e1 = img**2 * k_one - 2.0 * img * convolve2d(f1, kernel) + convolve2d(f1**2, kernel)
    e2 = img**2 * k_one - 2.0 * img * convolve2d(f2, kernel) + convolve2d(f2**2, kernel)
    data = dirac(phi, params.eps) * (-params.lambda1 * e1 + params.lambda2 * e2)
    return data + _regularizers(phi, params)


def local_means_window(field, phi, window):
    """Windowed region means with hard membership indicators.

    m1 averages the field over {phi > 0} within the window, m2 over
    {phi <= 0}; where a window sees no pixels of a region the clamped
    denominator yields 0. Multi-channel fields are averaged per channel.
    """
    ind = (np.asarray(phi) > 0).astype(np.float64)
    den1 = np.maximum(convolve2d(ind, window), DENOM_FLOOR)
    den2 = np.maximum(convolve2d(1.0 - ind, window), DENOM_FLOOR)
    planes = _channels(field)
    m1 = [convolve2d(ind * p, window) / den1 for p in planes]
    m2 = [convolve2d((1.0 - ind) * p, window) / den2 for p in planes]
    if np.asarray(field).ndim == 2:
        return m1[0], m2[0]
    return np.stack(m1, axis=-1), np.stack(m2, axis=-1)


def fitted_image(m1, m2, phi, eps: float):
    """Piecewise reconstruction m1 * H(phi) + m2 * (1 - H(phi))."""
    h = heaviside(phi, eps)
    if np.asarray(m1).ndim == 3:
        h = h[:, :, None]
    return m1 * h + m2 * (1.0 - h)


def lif_force(img, phi, params: ModelParams):
    """Local-image-fitting force (I - I_fit) (m1 - m2) dirac(phi)."""
    img = _as_gray(img)
    window = truncated_window(params.sigma_m)
    m1, m2 = local_means_window(img, phi, window)
    fit = fitted_image(m1, m2, phi, params.eps)
    return (img - fit) * (m1 - m2) * dirac(phi, params.eps)


def edge_indicator(img, sigma: float = 0.8, ksize: int = 3):
    """g = 1 / (1 + |grad(G_sigma * I)|^2); near 0 on strong edges, 1 on flats."""
    img = _as_gray(img)
    return _edge_indicator_multi([img], sigma, ksize)


def _edge_indicator_multi(planes, sigma=0.8, ksize=3):
    kernel = gaussian_kernel(sigma, ksize)
    energy = np.zeros_like(planes[0])
    for p in planes:
        sm = convolve2d(p, kernel)
        pad = np.pad(sm, 1, mode="edge")
        gx = (pad[1:-1, 2:] - pad[1:-1, :-2]) / 2.0
        gy = (pad[2:, 1:-1] - pad[:-2, 1:-1]) / 2.0
        energy += gx**2 + gy**2
    return 1.0 / (1.0 + energy)


def sdrel_force(img, saliency, phi, params: ModelParams):
    """Edge-gated global force over intensity and saliency region means.

    Color (Lab) input sums the squared intensity residuals over channels;
    the edge gate then uses the channel-summed gradient energy.
    """
    planes = _channels(img)
    eps = params.eps
    data = np.zeros_like(planes[0])
    res1 = np.zeros_like(planes[0])
    res2 = np.zeros_like(planes[0])
    for p in planes:
        c1, c2 = region_means_global(p, phi, eps)
        res1 += (p - c1) ** 2
        res2 += (p - c2) ** 2
    data += -params.lambda1 * res1 + params.lambda2 * res2
    s1, s2 = region_means_global(saliency, phi, eps)
    data += -params.alpha1 * (saliency - s1) ** 2 + params.alpha2 * (saliency - s2) ** 2
    g = _edge_indicator_multi(planes, sigma=0.8, ksize=3)
    return g * data + _regularizers(phi, params)


def _norm_over_channels(arr):
    if arr.ndim == 2:
        return np.abs(arr)
    return np.sqrt((arr**2).sum(axis=-1))


def proposed_force(img, saliency, phi, params: ModelParams):
    """Saliency-driven local fitting combined with local image fitting.

    The saliency map is locally fitted with the sigma_s window and the image
    with the sigma_m window; each contributes a (residual) * (mean contrast)
    force gated by the smoothed impulse. Grayscale inputs keep the signed
    products; Lab inputs replace both factors by Euclidean channel norms.
    """
    img = np.asarray(img, dtype=np.float64)
    color = img.ndim == 3
    d = dirac(phi, params.eps)

    ls1, ls2 = local_means_window(saliency, phi, truncated_window(params.sigma_s))
    s_fit = fitted_image(ls1, ls2, phi, params.eps)
    m1, m2 = local_means_window(img, phi, truncated_window(params.sigma_m))
    i_fit = fitted_image(m1, m2, phi, params.eps)

    if color:
        lsf_term = np.abs(saliency - s_fit) * np.abs(ls1 - ls2) * d
        lif_term = _norm_over_channels(img - i_fit) * _norm_over_channels(m1 - m2) * d
    else:
        lsf_term = (saliency - s_fit) * (ls1 - ls2) * d
        lif_term = (img - i_fit) * (m1 - m2) * d
    return lsf_term + lif_term + _regularizers(phi, params)


def compute_force(model_id: str, img, phi, params: ModelParams, saliency=None):
    """Dispatch to the force field of the requested model."""
    if model_id not in MODEL_IDS:
        raise ValueError(f"unknown model {model_id!r}; valid ids: {', '.join(MODEL_IDS)}")
    if model_id in SALIENCY_MODELS and saliency is None:
        raise ValueError(f"model {model_id!r} needs a saliency map")
    if model_id == "cv":
        return cv_force(img, phi, params)
    if model_id == "lbf":
        return lbf_force(img, phi, params)
    if model_id == "lif":
        return lif_force(img, phi, params)
    if model_id == "sdrel":
        return sdrel_force(img, saliency, phi, params)
    return proposed_force(img, saliency, phi, params)


@dataclass
class EvolutionTrace:
    iterations_run: int
    flip_counts: list[int]
    phi: np.ndarray
    mask: np.ndarray
    wall_ms: float
    converged: bool = field(default=False)


# sign-flip stagnation must persist this many iterations before stopping
STAGNATION_RUN = 5


def evolve(model_id: str, img, saliency, phi0, params: ModelParams) -> EvolutionTrace:
    """Explicit evolution phi += dt * force until stagnation or max_iters.

    Stops once the per-iteration count of sign flips stays below
    tol * (width * height) for 5 consecutive iterations. Raises
    EvolutionAborted if phi leaves the finite range.
    """
    phi = np.array(phi0, dtype=np.float64, copy=True)
    n_pixels = phi.size
    threshold = params.tol * n_pixels
    flip_counts: list[int] = []
    calm = 0
    converged = False
    start = time.perf_counter()
    for it in range(params.max_iters):
        force = compute_force(model_id, img, phi, params, saliency=saliency)
        with np.errstate(over="ignore", invalid="ignore"):
            new_phi = phi + params.dt * force
        if not np.all(np.isfinite(new_phi)):
            finite = force[np.isfinite(force)]
            finite_max = float(np.abs(finite).max()) if finite.size else float("inf")
            raise EvolutionAborted(iteration=it, max_force=finite_max)
        flips = int(np.count_nonzero((new_phi > 0) != (phi > 0)))
        flip_counts.append(flips)
        phi = new_phi
        calm = calm + 1 if flips < threshold else 0
        if calm >= STAGNATION_RUN:
            converged = True
            break
    wall_ms = (time.perf_counter() - start) * 1000.0
    return EvolutionTrace(
        iterations_run=len(flip_counts),
        flip_counts=flip_counts,
        phi=phi,
        mask=mask_from_phi(phi),
        wall_ms=wall_ms,
        converged=converged,
    )
