import logging
import warnings
from functools import lru_cache
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, optimize

from ttspin.settings import settings
from ttspin.utils.errors import NoRootInBracket, QuadratureFailure

logger = logging.getLogger(__name__)


def adaptive_quad(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    epsrel: Optional[float] = None,
    epsabs: Optional[float] = None,
    limit: Optional[int] = None,
) -> float:
    """
    Integrate a scalar function with adaptive Gauss-Kronrod subdivision.

    Args:
        func (Callable): Integrand.
        lo (float): Lower limit.
        hi (float): Upper limit.
        epsrel (float, optional): Relative tolerance, defaults to settings.QUAD_EPSREL.
        epsabs (float, optional): Absolute floor, defaults to settings.QUAD_EPSABS.
        limit (int, optional): Maximum number of subintervals, defaults to settings.QUAD_LIMIT.

    Returns:
        float: The integral estimate.

    Raises:
        QuadratureFailure: If scipy reports that the tolerance could not be reached.
    """
    if hi == lo:
        return 0.0
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", integrate.IntegrationWarning)
        value, error = integrate.quad(
            func,
            lo,
            hi,
            epsrel=settings.QUAD_EPSREL if epsrel is None else epsrel,
            epsabs=settings.QUAD_EPSABS if epsabs is None else epsabs,
            limit=settings.QUAD_LIMIT if limit is None else limit,
        )
    problems = [w for w in caught if issubclass(w.category, integrate.IntegrationWarning)]
    if problems:
        raise QuadratureFailure(f"quad on [{lo:.6g}, {hi:.6g}] failed: {problems[0].message}")
    logger.debug("quad [%.6g, %.6g] = %.9g +- %.2g", lo, hi, value, error)
    return value


def adaptive_quad_vec(
    func: Callable[[float], np.ndarray],
    lo: float,
    hi: float,
    epsrel: Optional[float] = None,
    epsabs: Optional[float] = None,
    limit: Optional[int] = None,
    points: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """
    Integrate a vector-valued function with one shared adaptive subdivision.

    Args:
        func (Callable): Integrand returning a 1-D array.
        lo (float): Lower limit.
        hi (float): Upper limit.
        epsrel (float, optional): Relative tolerance, defaults to settings.QUAD_EPSREL.
        epsabs (float, optional): Absolute floor, defaults to settings.QUAD_EPSABS.
        limit (int, optional): Maximum number of subintervals, defaults to settings.QUAD_LIMIT.
        points (Sequence[float], optional): Interior break points for the initial subdivision.

    Returns:
        np.ndarray: Componentwise integrals.

    Raises:
        QuadratureFailure: If the subdivision budget is exhausted or the integrand is not finite.
    """
    if hi == lo:
        return np.zeros_like(np.asarray(func(lo), dtype=float))
    value, error, info = integrate.quad_vec(
        func,
        lo,
        hi,
        epsrel=settings.QUAD_EPSREL if epsrel is None else epsrel,
        epsabs=settings.QUAD_EPSABS if epsabs is None else epsabs,
        limit=settings.QUAD_LIMIT if limit is None else limit,
        norm="max",
        points=points,
        full_output=True,
    )
    if info.status != 0:
        raise QuadratureFailure(f"quad_vec on [{lo:.6g}, {hi:.6g}] failed with status {info.status}")
    logger.debug("quad_vec [%.6g, %.6g]: %d evaluations, error %.2g", lo, hi, info.neval, error)
    return np.asarray(value, dtype=float)


@lru_cache(maxsize=16)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Return Gauss-Legendre nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def bisect_root(func: Callable[[float], float], lo: float, hi: float, xtol: Optional[float] = None) -> float:
    """
    Locate a sign change of func inside [lo, hi] by bisection.

    Args:
        func (Callable): Continuous function with f(lo) * f(hi) <= 0.
        lo (float): Bracket start.
        hi (float): Bracket end.
        xtol (float, optional): Absolute tolerance, defaults to settings.ROOT_XTOL.

    Returns:
        float: The root.

    Raises:
        NoRootInBracket: If the bracket shows no sign change.
    """
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if np.sign(f_lo) == np.sign(f_hi):
        raise NoRootInBracket(f"no sign change in [{lo:.9g}, {hi:.9g}]")
    root = optimize.bisect(func, lo, hi, xtol=settings.ROOT_XTOL if xtol is None else xtol, maxiter=200)
    logger.debug("root in [%.9g, %.9g] at %.12g", lo, hi, root)
    return root


def scan_roots(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    points: Optional[int] = None,
    xtol: Optional[float] = None,
) -> List[float]:
    """
    Find every sign change of func on a uniform scan and refine each one by bisection.

    Args:
        func (Callable): Function to scan.
        lo (float): Scan start.
        hi (float): Scan end.
        points (int, optional): Number of scan points, defaults to settings.SCAN_POINTS.
        xtol (float, optional): Bisection tolerance.

    Returns:
        List[float]: Ascending roots, possibly empty.
    """
    grid = np.linspace(lo, hi, settings.SCAN_POINTS if points is None else points)
    values = np.array([func(x) for x in grid])
    roots = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            roots.append(float(grid[i]))
        elif values[i] * values[i + 1] < 0.0:
            roots.append(bisect_root(func, grid[i], grid[i + 1], xtol=xtol))
    if values[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots
