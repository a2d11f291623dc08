use crate::error::{Error, Result};
use crate::model::StateSpaceSystem;
use crate::numkernel::{ComplexMatrix, ComplexVector, C64};

pub const DEFAULT_BREAKDOWN_TOL: f64 = 1e-12;

/// Biorthogonal Lanczos factorization of `K = E^{-1}A`:
///
/// `K V = V T + gamma_next * next_v * e_l^T`, `K^H W = W T^H + conj(beta_next) * next_w * e_l^T`,
/// with `W^H V = I` and `T` tridiagonal. The starting pair is normalized so that
/// `w_1^H v_1 = 1`; the raw inner product of the inputs is kept in `m0`.
#[derive(Debug, Clone)]
pub struct LanczosFactorization {
    pub v: ComplexMatrix,
    pub w: ComplexMatrix,
    pub t: ComplexMatrix,
    pub next_v: ComplexVector,
    pub next_w: ComplexVector,
    pub gamma_next: C64,
    pub beta_next: C64,
    pub m0: C64,
}

impl LanczosFactorization {
    pub fn steps(&self) -> usize {
        self.t.nrows()
    }
}

/// Removes components along the current biorthogonal pairs, twice.
fn rebiorthogonalize(v: &mut ComplexVector, w: &mut ComplexVector, vs: &[ComplexVector], ws: &[ComplexVector]) {
    for _pass in 0..2 {
        for (vi, wi) in vs.iter().zip(ws) {
            let cv = wi.dotc(v);
            v.axpy(-cv, vi, C64::from(1.0));
            let cw = vi.dotc(w);
            w.axpy(-cw, wi, C64::from(1.0));
        }
    }
}

/// Two-sided Lanczos on `K` (right) and `K^H` (left) with full rebiorthogonalization.
///
/// Fails with `Breakdown { step }` when the pair that would become column `step`
/// (1-based) has `|w^H v| < breakdown_tol * ||w|| * ||v||`. The trailing pair after
/// the last step is never normalized when that would break down: it is then stored
/// raw with `gamma_next = beta_next = 1`, which keeps the relations exact.
pub fn lanczos_biorth(
    sys: &StateSpaceSystem,
    v1: &ComplexVector,
    w1: &ComplexVector,
    steps: usize,
    breakdown_tol: f64,
) -> Result<LanczosFactorization> {
    let n = sys.n();
    if v1.len() != n || w1.len() != n {
        return Err(Error::DimensionMismatch(format!("starting vectors must have length {n}")));
    }
    if steps == 0 || steps > n {
        return Err(Error::InvalidArgument(format!("steps must lie in 1..={n}, got {steps}")));
    }
    let solver = sys.solver();
    let m0 = w1.dotc(v1);
    let (nv, nw) = (v1.norm(), w1.norm());
    if nv == 0.0 || nw == 0.0 || m0.norm() < breakdown_tol * nv * nw {
        return Err(Error::Breakdown { step: 1 });
    }
    let mut vs = vec![v1 / C64::from(nv)];
    let mut ws = vec![w1 * (C64::from(nv) / m0.conj())];
    let mut t = ComplexMatrix::zeros(steps, steps);

    for j in 0..steps {
        let kv = solver.apply_operator(&vs[j]);
        let kw = solver.apply_operator_adjoint(&ws[j]);
        let alpha = ws[j].dotc(&kv);
        t[(j, j)] = alpha;
        let mut vp = kv - &vs[j] * alpha;
        let mut wp = kw - &ws[j] * alpha.conj();
        if j > 0 {
            vp -= &vs[j - 1] * t[(j - 1, j)];
            wp -= &ws[j - 1] * t[(j, j - 1)].conj();
        }
        rebiorthogonalize(&mut vp, &mut wp, &vs, &ws);
        let s = wp.dotc(&vp);
        let healthy = s.norm() >= breakdown_tol * vp.norm() * wp.norm() && s.norm() > 0.0;
        if j + 1 == steps {
            let (gamma, beta, next_v, next_w) = if healthy {
                let delta = s.norm().sqrt();
                let beta = s / delta;
                (C64::from(delta), beta, vp / C64::from(delta), wp / beta.conj())
            } else {
                (C64::from(1.0), C64::from(1.0), vp, wp)
            };
            return Ok(LanczosFactorization {
                v: ComplexMatrix::from_columns(&vs),
                w: ComplexMatrix::from_columns(&ws),
                t,
                next_v,
                next_w,
                gamma_next: gamma,
                beta_next: beta,
                m0,
            });
        }
        if !healthy {
            return Err(Error::Breakdown { step: j + 2 });
        }
        let delta = s.norm().sqrt();
        let beta = s / delta;
        t[(j + 1, j)] = C64::from(delta);
        t[(j, j + 1)] = beta;
        vs.push(vp / C64::from(delta));
        ws.push(wp / beta.conj());
    }
    unreachable!("loop returns on its last step")
}
