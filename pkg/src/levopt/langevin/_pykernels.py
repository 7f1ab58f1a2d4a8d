"""Pure-Python fallback kernels.

Same contracts, same normal-draw order and same expression order as the
compiled ``_kernels`` module, so both backends produce bit-identical
trajectories from the same bit-generator stream. Normals are drawn from
``numpy.random.Generator.standard_normal`` in chunks, which consumes the
underlying bit stream exactly like the compiled kernels' per-step draws.

This backend is orders of magnitude slower (a Python-level loop per step);
it exists so the package works without a compiler and as an independent
reference for the compiled kernels.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 65536


def draw_normals(bit_generator, n, out):
    out[:n] = np.random.Generator(bit_generator).standard_normal(n)


class _Stream:
    """Chunked per-step normal supply from a bit generator.

    Draws exactly per_step * total_steps normals over its lifetime, so the
    bit-stream position after the kernel matches the compiled backend's
    per-step draws even when kernels are chained on one generator.
    """

    def __init__(self, bit_generator, per_step: int, total_steps: int):
        self._gen = np.random.Generator(bit_generator)
        self._per = per_step
        self._left = per_step * total_steps
        self._buf = np.empty(0)
        self._i = 0

    def take(self):
        if self._i >= self._buf.size:
            n = min(_CHUNK * self._per, self._left)
            self._buf = self._gen.standard_normal(n)
            self._left -= n
            self._i = 0
        row = self._buf[self._i:self._i + self._per]
        self._i += self._per
        return row


def thermal_exact(bit_generator, state, n_burn, steps_per_batch, n_batches,
                  phi11, phi12, phi21, phi22, c11, c21, c22,
                  batch_q2, rec_every, rec_q, rec_v):
    stream = _Stream(bit_generator, 2, n_burn + steps_per_batch * n_batches)
    q, v = state[0], state[1]
    step = 0
    rec_i = 0
    rec = rec_every > 0
    for _ in range(n_burn):
        xi_z, xi_v = stream.take()
        nq = phi11 * q + phi12 * v + c11 * xi_z
        nv = phi21 * q + phi22 * v + c21 * xi_z + c22 * xi_v
        q = nq
        v = nv
        step += 1
        if rec and step % rec_every == 0 and rec_i < rec_q.shape[0]:
            rec_q[rec_i] = q; rec_v[rec_i] = v; rec_i += 1
    for b in range(n_batches):
        acc = 0.0
        for _ in range(steps_per_batch):
            xi_z, xi_v = stream.take()
            nq = phi11 * q + phi12 * v + c11 * xi_z
            nv = phi21 * q + phi22 * v + c21 * xi_z + c22 * xi_v
            q = nq
            v = nv
            acc += q * q
            step += 1
            if rec and step % rec_every == 0 and rec_i < rec_q.shape[0]:
                rec_q[rec_i] = q; rec_v[rec_i] = v; rec_i += 1
        batch_q2[b] = acc
    state[0] = q
    state[1] = v


def thermal_semi_implicit(bit_generator, state, n_burn, steps_per_batch, n_batches,
                          dt, omega2, gamma_tot, sigma_step, batch_q2,
                          rec_every, rec_q, rec_v):
    stream = _Stream(bit_generator, 1, n_burn + steps_per_batch * n_batches)
    q, v = state[0], state[1]
    denom = 1.0 + gamma_tot * dt
    step = 0
    rec_i = 0
    rec = rec_every > 0
    for _ in range(n_burn):
        (xi_v,) = stream.take()
        v = (v - dt * omega2 * q + sigma_step * xi_v) / denom
        q = q + dt * v
        step += 1
        if rec and step % rec_every == 0 and rec_i < rec_q.shape[0]:
            rec_q[rec_i] = q; rec_v[rec_i] = v; rec_i += 1
    for b in range(n_batches):
        acc = 0.0
        for _ in range(steps_per_batch):
            (xi_v,) = stream.take()
            v = (v - dt * omega2 * q + sigma_step * xi_v) / denom
            q = q + dt * v
            acc += q * q
            step += 1
            if rec and step % rec_every == 0 and rec_i < rec_q.shape[0]:
                rec_q[rec_i] = q; rec_v[rec_i] = v; rec_i += 1
        batch_q2[b] = acc
    state[0] = q
    state[1] = v


def parametric_joint_exact(bit_generator, state, n_burn, steps_per_batch, n_batches,
                           phi11, phi12, phi21, phi22, c11, c21, c22,
                           a_p, s_p, drive_coef, b1, b2,
                           batch_zg2, batch_cross, batch_zt2):
    stream = _Stream(bit_generator, 3, n_burn + steps_per_batch * n_batches)
    zt, vt, dp, zg, vg = state

    def advance():
        nonlocal zt, vt, dp, zg, vg
        xi_z, xi_v, xi_p = stream.take()
        u = drive_coef * dp * zt
        nzg = phi11 * zg + phi12 * vg + b1 * u
        nvg = phi21 * zg + phi22 * vg + b2 * u
        nzt = phi11 * zt + phi12 * vt + c11 * xi_z
        nvt = phi21 * zt + phi22 * vt + c21 * xi_z + c22 * xi_v
        dp = a_p * dp + s_p * xi_p
        zg = nzg; vg = nvg; zt = nzt; vt = nvt

    for _ in range(n_burn):
        advance()
    for b in range(n_batches):
        acc_g = acc_c = acc_t = 0.0
        for _ in range(steps_per_batch):
            advance()
            acc_g += zg * zg
            acc_c += zg * zt
            acc_t += zt * zt
        batch_zg2[b] = acc_g
        batch_cross[b] = acc_c
        batch_zt2[b] = acc_t
    state[:] = (zt, vt, dp, zg, vg)


def parametric_joint_semi(bit_generator, state, n_burn, steps_per_batch, n_batches,
                          dt, omega2, gamma_tot, sigma_step, a_p, s_p, drive_coef,
                          batch_zg2, batch_cross, batch_zt2):
    stream = _Stream(bit_generator, 2, n_burn + steps_per_batch * n_batches)
    zt, vt, dp, zg, vg = state
    denom = 1.0 + gamma_tot * dt

    def advance():
        nonlocal zt, vt, dp, zg, vg
        xi_v, xi_p = stream.take()
        u = drive_coef * dp * zt
        vg = (vg - dt * omega2 * zg + dt * u) / denom
        zg = zg + dt * vg
        vt = (vt - dt * omega2 * zt + sigma_step * xi_v) / denom
        zt = zt + dt * vt
        dp = a_p * dp + s_p * xi_p

    for _ in range(n_burn):
        advance()
    for b in range(n_batches):
        acc_g = acc_c = acc_t = 0.0
        for _ in range(steps_per_batch):
            advance()
            acc_g += zg * zg
            acc_c += zg * zt
            acc_t += zt * zt
        batch_zg2[b] = acc_g
        batch_cross[b] = acc_c
        batch_zt2[b] = acc_t
    state[:] = (zt, vt, dp, zg, vg)


def bath_path_exact(bit_generator, state, n_steps,
                    phi11, phi12, phi21, phi22, c11, c21, c22,
                    a_p, s_p, out_zt, out_dp):
    stream = _Stream(bit_generator, 3, n_steps)
    zt, vt, dp = state
    for i in range(n_steps):
        out_zt[i] = zt
        out_dp[i] = dp
        xi_z, xi_v, xi_p = stream.take()
        nzt = phi11 * zt + phi12 * vt + c11 * xi_z
        nvt = phi21 * zt + phi22 * vt + c21 * xi_z + c22 * xi_v
        dp = a_p * dp + s_p * xi_p
        zt = nzt; vt = nvt
    out_zt[n_steps] = zt
    out_dp[n_steps] = dp
    state[:] = (zt, vt, dp)


def response_zoh(state, zt_path, dp_path, n_steps,
                 phi11, phi12, phi21, phi22, drive_coef, b1, b2):
    zg, vg = state
    acc_g = acc_c = acc_t = 0.0
    for i in range(n_steps):
        u = drive_coef * dp_path[i] * zt_path[i]
        nzg = phi11 * zg + phi12 * vg + b1 * u
        nvg = phi21 * zg + phi22 * vg + b2 * u
        zg = nzg; vg = nvg
        zt_next = zt_path[i + 1]
        acc_g += zg * zg
        acc_c += zg * zt_next
        acc_t += zt_next * zt_next
    state[0] = zg
    state[1] = vg
    return acc_g, acc_c, acc_t
