# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled stochastic-integrator kernels.

Hot inner loops of the Langevin oracle: one call integrates one full
trajectory (normals drawn on the fly from the trajectory's own counter-based
bit generator), accumulating per-batch sums of the squared coordinate.

The arithmetic (expression order included) mirrors
``levopt.langevin._pykernels`` exactly, and the extension is compiled with
-ffp-contract=off, so both backends produce bit-identical trajectories from
the same bit-generator stream.

Normal-draw order per step:
  exact_ou thermal:        xi_z, xi_v
  semi_implicit thermal:   xi_v
  exact_ou parametric:     xi_z, xi_v, xi_p
  semi_implicit parametric: xi_v, xi_p
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_normal


cdef bitgen_t *_bitgen(object bit_generator) except NULL:
    return <bitgen_t *> PyCapsule_GetPointer(bit_generator.capsule, "BitGenerator")


def draw_normals(object bit_generator, Py_ssize_t n, double[::1] out):
    """Fill ``out[:n]`` with standard normals (stream-equivalence testing)."""
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef Py_ssize_t i
    with bit_generator.lock, nogil:
        for i in range(n):
            out[i] = random_standard_normal(rng)


def thermal_exact(object bit_generator, double[::1] state,
                  long n_burn, long steps_per_batch, long n_batches,
                  double phi11, double phi12, double phi21, double phi22,
                  double c11, double c21, double c22,
                  double[::1] batch_q2,
                  long rec_every, double[::1] rec_q, double[::1] rec_v):
    """Exact Gaussian-transition update of a damped thermal oscillator."""
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef double q = state[0], v = state[1]
    cdef double xi_z, xi_v, nq, nv, acc
    cdef long b, i, step = 0
    cdef Py_ssize_t rec_i = 0
    cdef bint rec = rec_every > 0
    with bit_generator.lock, nogil:
        for i in range(n_burn):
            xi_z = random_standard_normal(rng)
            xi_v = random_standard_normal(rng)
            nq = phi11 * q + phi12 * v + c11 * xi_z
            nv = phi21 * q + phi22 * v + c21 * xi_z + c22 * xi_v
            q = nq
            v = nv
            step += 1
            if rec and step % rec_every == 0 and rec_i < rec_q.shape[0]:
                rec_q[rec_i] = q; rec_v[rec_i] = v; rec_i += 1
        for b in range(n_batches):
            acc = 0.0
            for i in range(steps_per_batch):
                xi_z = random_standard_normal(rng)
                xi_v = random_standard_normal(rng)
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


def thermal_semi_implicit(object bit_generator, double[::1] state,
                          long n_burn, long steps_per_batch, long n_batches,
                          double dt, double omega2, double gamma_tot,
                          double sigma_step, double[::1] batch_q2,
                          long rec_every, double[::1] rec_q, double[::1] rec_v):
    """Semi-implicit Euler-Maruyama update (drag treated implicitly)."""
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef double q = state[0], v = state[1]
    cdef double xi_v, acc
    cdef double denom = 1.0 + gamma_tot * dt
    cdef long b, i, step = 0
    cdef Py_ssize_t rec_i = 0
    cdef bint rec = rec_every > 0
    with bit_generator.lock, nogil:
        for i in range(n_burn):
            xi_v = random_standard_normal(rng)
            v = (v - dt * omega2 * q + sigma_step * xi_v) / denom
            q = q + dt * v
            step += 1
            if rec and step % rec_every == 0 and rec_i < rec_q.shape[0]:
                rec_q[rec_i] = q; rec_v[rec_i] = v; rec_i += 1
        for b in range(n_batches):
            acc = 0.0
            for i in range(steps_per_batch):
                xi_v = random_standard_normal(rng)
                v = (v - dt * omega2 * q + sigma_step * xi_v) / denom
                q = q + dt * v
                acc += q * q
                step += 1
                if rec and step % rec_every == 0 and rec_i < rec_q.shape[0]:
                    rec_q[rec_i] = q; rec_v[rec_i] = v; rec_i += 1
            batch_q2[b] = acc
    state[0] = q
    state[1] = v


def parametric_joint_exact(object bit_generator, double[::1] state,
                           long n_burn, long steps_per_batch, long n_batches,
                           double phi11, double phi12, double phi21, double phi22,
                           double c11, double c21, double c22,
                           double a_p, double s_p,
                           double drive_coef, double b1, double b2,
                           double[::1] batch_zg2, double[::1] batch_cross,
                           double[::1] batch_zt2):
    """Joint update of thermal motion, power noise and the driven response.

    state = [z_t, v_t, dP, z_g, v_g]; the thermal coordinate and the power
    fluctuation evolve freely while the response oscillator is driven by a
    zero-order-hold acceleration drive_coef * dP * z_t evaluated at the
    step start.
    """
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef double zt = state[0], vt = state[1], dp = state[2]
    cdef double zg = state[3], vg = state[4]
    cdef double xi_z, xi_v, xi_p, u, nzt, nvt, nzg, nvg
    cdef double acc_g, acc_c, acc_t
    cdef long b, i
    with bit_generator.lock, nogil:
        for i in range(n_burn):
            xi_z = random_standard_normal(rng)
            xi_v = random_standard_normal(rng)
            xi_p = random_standard_normal(rng)
            u = drive_coef * dp * zt
            nzg = phi11 * zg + phi12 * vg + b1 * u
            nvg = phi21 * zg + phi22 * vg + b2 * u
            nzt = phi11 * zt + phi12 * vt + c11 * xi_z
            nvt = phi21 * zt + phi22 * vt + c21 * xi_z + c22 * xi_v
            dp = a_p * dp + s_p * xi_p
            zg = nzg; vg = nvg; zt = nzt; vt = nvt
        for b in range(n_batches):
            acc_g = 0.0
            acc_c = 0.0
            acc_t = 0.0
            for i in range(steps_per_batch):
                xi_z = random_standard_normal(rng)
                xi_v = random_standard_normal(rng)
                xi_p = random_standard_normal(rng)
                u = drive_coef * dp * zt
                nzg = phi11 * zg + phi12 * vg + b1 * u
                nvg = phi21 * zg + phi22 * vg + b2 * u
                nzt = phi11 * zt + phi12 * vt + c11 * xi_z
                nvt = phi21 * zt + phi22 * vt + c21 * xi_z + c22 * xi_v
                dp = a_p * dp + s_p * xi_p
                zg = nzg; vg = nvg; zt = nzt; vt = nvt
                acc_g += zg * zg
                acc_c += zg * zt
                acc_t += zt * zt
            batch_zg2[b] = acc_g
            batch_cross[b] = acc_c
            batch_zt2[b] = acc_t
    state[0] = zt; state[1] = vt; state[2] = dp
    state[3] = zg; state[4] = vg


def parametric_joint_semi(object bit_generator, double[::1] state,
                          long n_burn, long steps_per_batch, long n_batches,
                          double dt, double omega2, double gamma_tot,
                          double sigma_step, double a_p, double s_p,
                          double drive_coef,
                          double[::1] batch_zg2, double[::1] batch_cross,
                          double[::1] batch_zt2):
    """Semi-implicit counterpart of :func:`parametric_joint_exact`."""
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef double zt = state[0], vt = state[1], dp = state[2]
    cdef double zg = state[3], vg = state[4]
    cdef double xi_v, xi_p, u
    cdef double denom = 1.0 + gamma_tot * dt
    cdef double acc_g, acc_c, acc_t
    cdef long b, i
    with bit_generator.lock, nogil:
        for i in range(n_burn):
            xi_v = random_standard_normal(rng)
            xi_p = random_standard_normal(rng)
            u = drive_coef * dp * zt
            vg = (vg - dt * omega2 * zg + dt * u) / denom
            zg = zg + dt * vg
            vt = (vt - dt * omega2 * zt + sigma_step * xi_v) / denom
            zt = zt + dt * vt
            dp = a_p * dp + s_p * xi_p
        for b in range(n_batches):
            acc_g = 0.0
            acc_c = 0.0
            acc_t = 0.0
            for i in range(steps_per_batch):
                xi_v = random_standard_normal(rng)
                xi_p = random_standard_normal(rng)
                u = drive_coef * dp * zt
                vg = (vg - dt * omega2 * zg + dt * u) / denom
                zg = zg + dt * vg
                vt = (vt - dt * omega2 * zt + sigma_step * xi_v) / denom
                zt = zt + dt * vt
                dp = a_p * dp + s_p * xi_p
                acc_g += zg * zg
                acc_c += zg * zt
                acc_t += zt * zt
            batch_zg2[b] = acc_g
            batch_cross[b] = acc_c
            batch_zt2[b] = acc_t
    state[0] = zt; state[1] = vt; state[2] = dp
    state[3] = zg; state[4] = vg


def bath_path_exact(object bit_generator, double[::1] state, long n_steps,
                    double phi11, double phi12, double phi21, double phi22,
                    double c11, double c21, double c22,
                    double a_p, double s_p,
                    double[::1] out_zt, double[::1] out_dp):
    """Record the (z_t, dP) path prior to every step, plus the final values.

    out arrays must hold n_steps + 1 entries; entry i is the state at the
    start of step i, used by the staged response integrator as the
    zero-order-hold drive.
    """
    cdef bitgen_t *rng = _bitgen(bit_generator)
    cdef double zt = state[0], vt = state[1], dp = state[2]
    cdef double xi_z, xi_v, xi_p, nzt, nvt
    cdef long i
    with bit_generator.lock, nogil:
        for i in range(n_steps):
            out_zt[i] = zt
            out_dp[i] = dp
            xi_z = random_standard_normal(rng)
            xi_v = random_standard_normal(rng)
            xi_p = random_standard_normal(rng)
            nzt = phi11 * zt + phi12 * vt + c11 * xi_z
            nvt = phi21 * zt + phi22 * vt + c21 * xi_z + c22 * xi_v
            dp = a_p * dp + s_p * xi_p
            zt = nzt; vt = nvt
        out_zt[n_steps] = zt
        out_dp[n_steps] = dp
    state[0] = zt; state[1] = vt; state[2] = dp


def response_zoh(double[::1] state, double[::1] zt_path, double[::1] dp_path,
                 long n_steps,
                 double phi11, double phi12, double phi21, double phi22,
                 double drive_coef, double b1, double b2):
    """Drive the response oscillator along a recorded bath path.

    Returns (sum zg^2, sum zg*zt, sum zt^2) over the n_steps updates, the
    products taken after each step (so identical to the joint kernel's
    accumulation).
    """
    cdef double zg = state[0], vg = state[1]
    cdef double u, nzg, nvg, zt_next
    cdef double acc_g = 0.0, acc_c = 0.0, acc_t = 0.0
    cdef long i
    with nogil:
        for i in range(n_steps):
            u = drive_coef * dp_path[i] * zt_path[i]
            nzg = phi11 * zg + phi12 * vg + b1 * u
            nvg = phi21 * zg + phi22 * vg + b2 * u
            zg = nzg; vg = nvg
            zt_next = zt_path[i + 1]
            acc_g += zg * zg
            acc_c += zg * zt_next
            acc_t += zt_next * zt_next
    state[0] = zg; state[1] = vg
    return acc_g, acc_c, acc_t
