"""Analytic trajectory engine for the packet centre of mass.

The ladder expectation is an explicit trigonometric sum over level pairs
(n, n+1) and kz quadrature nodes; no time stepping is involved.  Per level
pair the four kz integrals are

    Ic+- = Int (1 +- E_n/E_{n+1}) |g_z|^2 cos[(E_{n+1} -+ E_n) t] dkz,
    Is+- = Int (1/E_n +- 1/E_{n+1}) |g_z|^2 sin[(E_{n+1} -+ E_n) t] dkz,

(in units mc^2 = 1) and the lowering/raising expectations are

    <A(t)>  = 1/2 sum_n sqrt(n+1) U_{n,n+1} (Ic+ + Ic- - i Is+ + i Is-),
    <A+(t)> = 1/2 sum_n sqrt(n+1) U_{n+1,n} (Ic+ + Ic- + i Is+ - i Is-).

The sign carried by Is+ makes the intraband part rotate with the phase
e^{-i omega_c t} required by Heisenberg evolution of a lowering operator;
it is validated against the brute-force matrix evolution in the tests.
Positions follow from the relative-coordinate operators

    Y = L (<A> + <A+>)/sqrt(2),    X = L (<A> - <A+>)/(i sqrt(2)).

These exclude the guiding-centre offset kx L^2, so a packet kicked by k0x
starts at Y(0) = -k0x L^2 and circles the origin.

The difference-frequency (E_{n+1} - E_n) terms form the intraband
(cyclotron) part and the sum-frequency (E_{n+1} + E_n) terms the interband
(trembling) part; both are exposed separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .landau import energies, energy
from .packet import GaussianPacket, Numerics, PacketDecomposition, decompose
from .params import Dimensionality, SimParams

_IMAG_RESIDUE_TOL = 1e-10
_CHUNK = 1 << 21  # matrix-element budget per trig evaluation block


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled expectation-value trajectory with band split.

    Positions are in the unit named by position_unit ("lambda_c" or "L");
    x = x_intraband + x_interband holds exactly, same for y.
    """

    times: np.ndarray
    x: np.ndarray
    y: np.ndarray
    x_interband: np.ndarray
    y_interband: np.ndarray
    x_intraband: np.ndarray
    y_intraband: np.ndarray
    mode: Dimensionality
    position_unit: str
    provenance: dict

    def in_magnetic_length_units(self) -> "Trajectory":
        """Rescale positions from Compton wavelengths to the magnetic length L."""
        if self.position_unit == "L":
            return self
        ell = self.provenance["magnetic_length"]
        return Trajectory(
            times=self.times,
            x=self.x / ell,
            y=self.y / ell,
            x_interband=self.x_interband / ell,
            y_interband=self.y_interband / ell,
            x_intraband=self.x_intraband / ell,
            y_intraband=self.y_intraband / ell,
            mode=self.mode,
            position_unit="L",
            provenance=self.provenance,
        )


def time_integrals(
    n: int, t, decomp: PacketDecomposition, params: SimParams
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four kz integrals (Ic+, Ic-, Is+, Is-) for the pair (n, n+1).

    In 2+1 mode the |g_z|^2 weight is a delta at kz = 0 and the integrals
    collapse to the kz = 0 integrand.  Accepts scalar or array t.
    """
    tarr = np.atleast_1d(np.asarray(t, dtype=float))
    kz = decomp.kz_nodes
    w = decomp.kz_weights
    e_lo = energies(n, kz, params)
    e_hi = energies(n + 1, kz, params)
    f_minus = e_hi - e_lo
    f_plus = e_hi + e_lo
    cos_minus = np.cos(np.outer(tarr, f_minus))
    cos_plus = np.cos(np.outer(tarr, f_plus))
    sin_minus = np.sin(np.outer(tarr, f_minus))
    sin_plus = np.sin(np.outer(tarr, f_plus))
    ic_plus = cos_minus @ (w * (1.0 + e_lo / e_hi))
    ic_minus = cos_plus @ (w * (1.0 - e_lo / e_hi))
    is_plus = sin_minus @ (w * (1.0 / e_lo + 1.0 / e_hi))
    is_minus = sin_plus @ (w * (1.0 / e_lo - 1.0 / e_hi))
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return ic_plus[0], ic_minus[0], is_plus[0], is_minus[0]
    return ic_plus, ic_minus, is_plus, is_minus


def _line_tables(decomp: PacketDecomposition, params: SimParams):
    """Flattened (level pair x kz node) frequency and coefficient arrays.

    Returns (f_minus, c_minus, s_minus, f_plus, c_plus, s_plus): the
    lowering expectation is

        <A(t)> = sum c_minus cos(f_minus t) - i sum s_minus sin(f_minus t)
               + sum c_plus  cos(f_plus t)  + i sum s_plus  sin(f_plus t).
    """
    kz = decomp.kz_nodes
    w = decomp.kz_weights
    n_pairs = decomp.n_max  # pairs (n, n+1) with n+1 <= n_max
    if n_pairs == 0:
        z = np.zeros(0)
        return z, z, z, z, z, z
    n_idx = np.arange(n_pairs)
    base = 0.5 * np.sqrt(n_idx + 1.0) * decomp.u_band[:n_pairs]  # (n_pairs,)
    e_lo = np.sqrt(params.mass_energy**2 + np.add.outer(n_idx * params.omega**2, kz**2))
    e_hi = np.sqrt(
        params.mass_energy**2 + np.add.outer((n_idx + 1) * params.omega**2, kz**2)
    )
    f_minus = (e_hi - e_lo).ravel()
    f_plus = (e_hi + e_lo).ravel()
    bw = base[:, None] * w[None, :]
    c_minus = (bw * (1.0 + e_lo / e_hi)).ravel()
    c_plus = (bw * (1.0 - e_lo / e_hi)).ravel()
    s_minus = (bw * (1.0 / e_lo + 1.0 / e_hi)).ravel()
    s_plus = (bw * (1.0 / e_lo - 1.0 / e_hi)).ravel()
    return f_minus, c_minus, s_minus, f_plus, c_plus, s_plus


def _trig_sum(t: np.ndarray, freqs: np.ndarray, c_cos: np.ndarray, c_sin: np.ndarray):
    """(sum c_cos cos(f t), sum c_sin sin(f t)) evaluated in bounded-memory blocks."""
    cos_out = np.zeros(t.size)
    sin_out = np.zeros(t.size)
    if freqs.size == 0:
        return cos_out, sin_out
    step = max(1, _CHUNK // freqs.size)
    for lo in range(0, t.size, step):
        phase = np.outer(t[lo : lo + step], freqs)
        cos_out[lo : lo + step] = np.cos(phase) @ c_cos
        sin_out[lo : lo + step] = np.sin(phase) @ c_sin
    return cos_out, sin_out


def _band_parts(t: np.ndarray, decomp: PacketDecomposition, params: SimParams):
    """Lowering expectation split into (intraband, interband) complex parts."""
    f_minus, c_minus, s_minus, f_plus, c_plus, s_plus = _line_tables(decomp, params)
    cos_m, sin_m = _trig_sum(t, f_minus, c_minus, s_minus)
    cos_p, sin_p = _trig_sum(t, f_plus, c_plus, s_plus)
    return cos_m - 1j * sin_m, cos_p + 1j * sin_p


def ladder_expectations(
    t, decomp: PacketDecomposition, params: SimParams
) -> tuple[np.ndarray, np.ndarray]:
    """(<A(t)>, <A+(t)>); the latter is the conjugate for real overlap tables."""
    tarr = np.atleast_1d(np.asarray(t, dtype=float))
    intra, inter = _band_parts(tarr, decomp, params)
    a_mean = intra + inter
    adag_mean = np.conj(a_mean)  # U_{n+1,n} = U_{n,n+1}* and real tables
    if np.isscalar(t) or np.asarray(t).ndim == 0:
        return a_mean[0], adag_mean[0]
    return a_mean, adag_mean


def _positions_from_ladder(a_mean: np.ndarray, adag_mean: np.ndarray, ell: float):
    y = ell * (a_mean + adag_mean) / math.sqrt(2.0)
    x = ell * (a_mean - adag_mean) / (1j * math.sqrt(2.0))
    residue = max(float(np.max(np.abs(x.imag), initial=0.0)),
                  float(np.max(np.abs(y.imag), initial=0.0)))
    if residue > _IMAG_RESIDUE_TOL:
        raise RuntimeError(
            f"imaginary residue {residue:.3e} of the position sums exceeds "
            f"{_IMAG_RESIDUE_TOL:.1e}"
        )
    return x.real, y.real, residue


def position(t, decomp: PacketDecomposition, params: SimParams):
    """Centre-of-mass (x, y) in Compton wavelengths at time(s) t."""
    scalar = np.isscalar(t) or np.asarray(t).ndim == 0
    tarr = np.atleast_1d(np.asarray(t, dtype=float))
    a_mean, adag_mean = ladder_expectations(tarr, decomp, params)
    x, y, _ = _positions_from_ladder(a_mean, adag_mean, params.magnetic_length)
    if scalar:
        return float(x[0]), float(y[0])
    return x, y


def trajectory(
    packet: GaussianPacket,
    params: SimParams,
    t_grid: np.ndarray,
    mode: Dimensionality | None = None,
    numerics: Numerics | None = None,
    decomp: PacketDecomposition | None = None,
) -> Trajectory:
    """Batch trajectory over a uniform time grid, with the band split.

    Deterministic for a fixed configuration: all reductions are numpy
    pairwise sums in a fixed order.
    """
    t = np.asarray(t_grid, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t_grid must be a non-empty 1-d array")
    if t.size > 2:
        dt = np.diff(t)
        if np.max(np.abs(dt - dt[0])) > 1e-9 * max(abs(dt[0]), 1e-30):
            raise ValueError("t_grid must be uniform")
    run_mode = mode if mode is not None else params.dimensionality
    if decomp is None:
        decomp = decompose(packet, params, numerics, run_mode)
    elif decomp.mode is not run_mode:
        raise ValueError("decomposition mode does not match the requested mode")

    ell = params.magnetic_length
    intra_a, inter_a = _band_parts(t, decomp, params)
    x_intra, y_intra, res1 = _positions_from_ladder(intra_a, np.conj(intra_a), ell)
    x_inter, y_inter, res2 = _positions_from_ladder(inter_a, np.conj(inter_a), ell)

    provenance = {
        "field_ratio_b": params.field_ratio_b,
        "kappa": params.kappa,
        "magnetic_length": ell,
        "mode": run_mode.value,
        "packet": {
            "d_x": packet.d_x,
            "d_y": packet.d_y,
            "d_z": packet.d_z,
            "k0x": packet.k0x,
            "component": packet.component,
        },
        "n_max": decomp.n_max,
        "tail_mass": decomp.tail_mass,
        "kx_nodes": int(decomp.kx_nodes.size),
        "kz_nodes": int(decomp.kz_nodes.size),
        "imag_residue": max(res1, res2),
    }
    return Trajectory(
        times=t,
        x=x_intra + x_inter,
        y=y_intra + y_inter,
        x_interband=x_inter,
        y_interband=y_inter,
        x_intraband=x_intra,
        y_intraband=y_intra,
        mode=run_mode,
        position_unit="lambda_c",
        provenance=provenance,
    )


def cyclotron_reference(packet: GaussianPacket, params: SimParams) -> tuple[float, float]:
    """Reference cyclotron frequency (E_1 - E_0)/hbar at kz = 0 and orbit radius.

    The radius is the guiding-centre displacement k0x L^2 of the kicked
    packet; in the non-relativistic limit the frequency tends to
    hbar*eB/m = b^2/2 in natural units.
    """
    omega_c = energy(1, 0.0, params) - energy(0, 0.0, params)
    radius = packet.k0x * params.magnetic_length**2
    return omega_c, radius
