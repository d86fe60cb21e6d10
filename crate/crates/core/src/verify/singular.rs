use crate::action::apply_e;
use crate::error::{Error, Result};
use crate::fock::{GridIndex, MVector, Monomial};
use crate::scalar::{ParamEnv, Scalar};

/// A nonzero vector of the localized module, with every `x[m]` exponent negative,
/// annihilated by `e12(-m)` when `mu` is an integer.
///
/// With `l = 2d - mu - 1`, `a_j = q^{-m1 m2} (mu + j + l + 1 - 2d)(j - l)` and
/// `w_j = E_m^j(x[n]^d) / (a_1 ... a_j)`, the result is `sum_{j=0}^{d} x[m]^{j-l} w_j`.
pub fn singular_vector<F: Scalar>(
    mu: i64,
    m: GridIndex,
    n: GridIndex,
    d: i64,
    env: &ParamEnv<F>,
) -> Result<MVector<F>> {
    if d < 1 {
        return Err(Error::Precondition(format!("d must be positive, got {d}")));
    }
    if -d + mu + 1 >= 0 {
        return Err(Error::Precondition(format!(
            "need -d + mu + 1 < 0, got d = {d}, mu = {mu}"
        )));
    }
    if n.m1 * m.m2 - n.m2 * m.m1 == 0 {
        return Err(Error::Precondition(format!(
            "need n1*m2 - n2*m1 != 0, got m = {m}, n = {n}"
        )));
    }
    let env = env.with_mu(F::from_i64(mu));
    let l = 2 * d - mu - 1;
    let qm = env.q_power(-m.m1 * m.m2);

    let mut w = MVector::zero();
    let mut wj: MVector<F> = MVector::monomial(Monomial::power(n, d));
    for j in 0..=d {
        if !wj.partial(m).is_zero() {
            return Err(Error::Construction(format!("w_{j} depends on x{m}")));
        }
        w = w.add(&wj.mono_mul(&Monomial::power(m, j - l)));
        if j == d {
            break;
        }
        let next = j + 1;
        let a = qm.clone() * F::from_i64((mu + next + l + 1 - 2 * d) * (next - l));
        if a.is_zero() {
            return Err(Error::Construction(format!("a_{next} vanishes")));
        }
        wj = apply_e(m, &wj, &env).scale(&a.inv()?);
    }
    Ok(w)
}
