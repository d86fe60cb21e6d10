//! The free-field realization as exact operators on module elements.
//!
//! Each generator is applied monomial by monomial through its closed form; the
//! infinite sums in the realization collapse to the indices present in the monomial.

use crate::algebra::{theta_closed, AlgElement, Atom, Generator};
use crate::error::{Error, Result};
use crate::fock::{GridIndex, MVector, ModuleSpace, Monomial, SpaceKind};
use crate::scalar::{ParamEnv, Scalar};

/// Eigenvalues of the Cartan operators `e11(0)`, `e22(0)`, `d1`, `d2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightValue<F> {
    pub e11: F,
    pub e22: F,
    pub d1: F,
    pub d2: F,
}

/// Untwisted action on one monomial, accumulated into `out`.
fn act_on_monomial<F: Scalar>(
    env: &ParamEnv<F>,
    g: Generator,
    mono: &Monomial,
    coef: &F,
    out: &mut MVector<F>,
) {
    match g {
        Generator::E21(n) => out.add_term(mono.shifted(&[(n, 1)]), coef.clone()),
        Generator::E11(n) => {
            if n == GridIndex::ZERO {
                out.add_term(mono.clone(), env.mu().clone() * coef.clone());
            }
            for (s, k) in mono.iter() {
                let c = -(coef.clone() * F::from_i64(k) * env.q_power(s.m2 * n.m1));
                out.add_term(mono.shifted(&[(s, -1), (n + s, 1)]), c);
            }
        }
        Generator::E22(n) => {
            for (s, k) in mono.iter() {
                let c = coef.clone() * F::from_i64(k) * env.q_power(s.m1 * n.m2);
                out.add_term(mono.shifted(&[(s, -1), (n + s, 1)]), c);
            }
        }
        Generator::E12(n) => {
            let k = mono.exponent(-n);
            if k != 0 {
                let c =
                    coef.clone() * env.q_power(-n.m1 * n.m2) * env.mu().clone() * F::from_i64(k);
                out.add_term(mono.shifted(&[(-n, -1)]), c);
            }
            for (s, ks) in mono.iter() {
                for (r, kr) in mono.iter() {
                    let factor = if s == r { ks * (ks - 1) } else { ks * kr };
                    if factor == 0 {
                        continue;
                    }
                    let c = -(coef.clone()
                        * F::from_i64(factor)
                        * env.q_power(n.m2 * r.m1 + s.m2 * n.m1 + s.m2 * r.m1));
                    out.add_term(mono.shifted(&[(s, -1), (r, -1), (n + s + r, 1)]), c);
                }
            }
        }
        Generator::D1 | Generator::D2 => {
            let eigen: i64 = mono
                .iter()
                .map(|(s, k)| k * if g == Generator::D1 { s.m1 } else { s.m2 })
                .sum();
            out.add_term(mono.clone(), coef.clone() * F::from_i64(eigen));
        }
    }
}

/// The untwisted operator of `g` on `v`, with no validity checks.
pub fn act_untwisted<F: Scalar>(env: &ParamEnv<F>, g: Generator, v: &MVector<F>) -> MVector<F> {
    let mut out = MVector::zero();
    for (mono, c) in v.iter() {
        act_on_monomial(env, g, mono, c, &mut out);
    }
    out
}

fn inverse_multiply<F: Scalar>(
    kind: &SpaceKind,
    m: GridIndex,
    v: &MVector<F>,
) -> Result<MVector<F>> {
    match *kind {
        SpaceKind::Localized(d) | SpaceKind::Twisted(d) if d == m => {
            Ok(v.mono_mul(&Monomial::power(m, -1)))
        }
        SpaceKind::Localized(d) | SpaceKind::Twisted(d) => Err(Error::InverseMismatch {
            found: m,
            expected: d,
        }),
        SpaceKind::Plain | SpaceKind::Quotient(_) => Err(Error::InverseOutsideLocalized(m)),
    }
}

/// Acts with a word combination through the untwisted localized operators.
fn act_words_localized<F: Scalar>(
    env: &ParamEnv<F>,
    m: GridIndex,
    u: &AlgElement<F>,
    v: &MVector<F>,
) -> Result<MVector<F>> {
    let kind = SpaceKind::Localized(m);
    let mut out = MVector::zero();
    for (word, c) in u.iter() {
        let mut w = v.clone();
        for atom in word.atoms().iter().rev() {
            w = match *atom {
                Atom::Gen(g) => act_untwisted(env, g, &w),
                Atom::InvE21(i) => inverse_multiply(&kind, i, &w)?,
            };
        }
        out.add_scaled(&w, c);
    }
    Ok(out)
}

fn act_checked<F: Scalar>(
    space: &ModuleSpace<F>,
    g: Generator,
    v: &MVector<F>,
) -> Result<MVector<F>> {
    match space.kind {
        SpaceKind::Plain | SpaceKind::Localized(_) => Ok(act_untwisted(&space.env, g, v)),
        SpaceKind::Quotient(m) => Ok(act_untwisted(&space.env, g, v).project_mod_m(m)),
        SpaceKind::Twisted(m) => {
            let b = space.env.require_b()?;
            let image = theta_closed(g, b, m, &space.env);
            act_words_localized(&space.env, m, &image, v)
        }
    }
}

/// `g . v` in the given space. Quotient results are projected to canonical representatives;
/// twisted actions go through the closed form of `Theta_b(g)`.
pub fn act_generator<F: Scalar>(
    space: &ModuleSpace<F>,
    g: Generator,
    v: &MVector<F>,
) -> Result<MVector<F>> {
    v.validate_in(&space.kind)?;
    act_checked(space, g, v)
}

/// `u . v`, folding each word right to left.
pub fn act_element<F: Scalar>(
    space: &ModuleSpace<F>,
    u: &AlgElement<F>,
    v: &MVector<F>,
) -> Result<MVector<F>> {
    v.validate_in(&space.kind)?;
    let mut out = MVector::zero();
    for (word, c) in u.iter() {
        let mut w = v.clone();
        for atom in word.atoms().iter().rev() {
            w = match *atom {
                Atom::Gen(g) => act_checked(space, g, &w)?,
                Atom::InvE21(m) => inverse_multiply(&space.kind, m, &w)?,
            };
        }
        out.add_scaled(&w, c);
    }
    if let SpaceKind::Quotient(m) = space.kind {
        out = out.project_mod_m(m);
    }
    Ok(out)
}

/// Applies `g` to `v` repeatedly.
pub fn act_power<F: Scalar>(
    space: &ModuleSpace<F>,
    g: Generator,
    k: usize,
    v: &MVector<F>,
) -> Result<MVector<F>> {
    let mut w = v.clone();
    for _ in 0..k {
        w = act_generator(space, g, &w)?;
    }
    Ok(w)
}

/// The second-order operator
/// `E_m = sum_{s,r} q^{-m2 r1 - s2 m1 + s2 r1} x[-m+s+r] d/dx[s] d/dx[r]`.
pub fn apply_e<F: Scalar>(m: GridIndex, v: &MVector<F>, env: &ParamEnv<F>) -> MVector<F> {
    let mut out = MVector::zero();
    let indices: Vec<GridIndex> = {
        let mut all: Vec<GridIndex> = v.monomials().flat_map(|mono| mono.indices()).collect();
        all.sort();
        all.dedup();
        all
    };
    for &s in &indices {
        let ds = v.partial(s);
        if ds.is_zero() {
            continue;
        }
        for &r in &indices {
            let drs = ds.partial(r);
            if drs.is_zero() {
                continue;
            }
            let coeff = env.q_power(-m.m2 * r.m1 - s.m2 * m.m1 + s.m2 * r.m1);
            let shifted = drs.mono_mul(&Monomial::var(-m + s + r));
            out.add_scaled(&shifted, &coeff);
        }
    }
    out
}

/// Iterates [`apply_e`] `k` times.
pub fn apply_e_power<F: Scalar>(
    m: GridIndex,
    k: usize,
    v: &MVector<F>,
    env: &ParamEnv<F>,
) -> MVector<F> {
    let mut w = v.clone();
    for _ in 0..k {
        if w.is_zero() {
            break;
        }
        w = apply_e(m, &w, env);
    }
    w
}

/// Weight of a simultaneous eigenvector of the Cartan operators.
pub fn weight_of<F: Scalar>(space: &ModuleSpace<F>, v: &MVector<F>) -> Result<WeightValue<F>> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut values = Vec::with_capacity(4);
    for g in [
        Generator::E11(GridIndex::ZERO),
        Generator::E22(GridIndex::ZERO),
        Generator::D1,
        Generator::D2,
    ] {
        let image = act_generator(space, g, v)?;
        let value = image.ratio_to(v).ok_or_else(|| Error::NotWeightVector {
            generator: g.to_string(),
        })?;
        values.push(value);
    }
    let mut it = values.into_iter();
    Ok(WeightValue {
        e11: it.next().expect("four values"),
        e22: it.next().expect("four values"),
        d1: it.next().expect("four values"),
        d2: it.next().expect("four values"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Word;
    use crate::scalar::{ratio, Rat, RatFunc, Var};

    fn g(a: i64, b: i64) -> GridIndex {
        GridIndex::new(a, b)
    }

    fn q() -> RatFunc {
        RatFunc::symbol(Var::Q)
    }

    fn mu() -> RatFunc {
        RatFunc::symbol(Var::Mu)
    }

    fn b() -> RatFunc {
        RatFunc::symbol(Var::B)
    }

    fn int(n: i64) -> RatFunc {
        RatFunc::from_i64(n)
    }

    fn plain() -> ModuleSpace<RatFunc> {
        ModuleSpace::plain(ParamEnv::symbolic())
    }

    fn mono(pairs: &[((i64, i64), i64)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().map(|&((a, b), k)| (g(a, b), k)))
    }

    #[test]
    fn vacuum_is_highest_weight() {
        let space = plain();
        let one = MVector::one();
        for a in -3..=3 {
            for c in -3..=3 {
                assert!(act_generator(&space, Generator::E12(g(a, c)), &one)
                    .unwrap()
                    .is_zero());
            }
        }
        assert_eq!(
            act_generator(&space, Generator::E11(GridIndex::ZERO), &one).unwrap(),
            MVector::term(Monomial::one(), mu())
        );
        assert!(act_generator(&space, Generator::E22(GridIndex::ZERO), &one)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn e22_single_surviving_term() {
        let space = plain();
        let v = MVector::var(g(1, 0));
        let got = act_generator(&space, Generator::E22(g(0, 1)), &v).unwrap();
        assert_eq!(got, MVector::term(Monomial::var(g(1, 1)), q()));
    }

    #[test]
    fn e12_on_square() {
        let space = plain();
        let v = MVector::monomial(mono(&[((1, 0), 2)]));
        let got = act_generator(&space, Generator::E12(GridIndex::ZERO), &v).unwrap();
        assert_eq!(got, MVector::term(Monomial::var(g(2, 0)), int(-2)));
    }

    #[test]
    fn localized_lemma_item_two_at_one() {
        let m = g(2, 3);
        let space = ModuleSpace::localized(ParamEnv::symbolic(), m);
        let v = MVector::monomial(Monomial::power(m, -1));
        let got = act_generator(&space, Generator::E12(-m), &v).unwrap();
        let want = MVector::term(
            Monomial::power(m, -2),
            -(mu() + int(2)) * ParamEnv::<RatFunc>::symbolic().q_power(-6),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn twisted_single_step() {
        let m = g(1, 2);
        let env = ParamEnv::symbolic();
        let space = ModuleSpace::twisted(env.clone(), m).unwrap();
        for j in -3..=3 {
            let v = MVector::monomial(Monomial::power(m, j));
            let got = act_generator(&space, Generator::E12(-m), &v).unwrap();
            let jj = int(j);
            let coeff = -((jj.clone() - b()) * (jj - b() - int(1) - mu())) * env.q_power(-2);
            assert_eq!(
                got,
                MVector::term(Monomial::power(m, j - 1), coeff),
                "j={j}"
            );
        }
    }

    #[test]
    fn act_element_identity_and_inverse_pair() {
        let m = g(0, 1);
        let space = ModuleSpace::localized(ParamEnv::symbolic(), m);
        let v = MVector::monomial(mono(&[((0, 1), -2), ((1, 1), 1)]));
        assert_eq!(act_element(&space, &AlgElement::one(), &v).unwrap(), v);
        let pair = AlgElement::word(Word::new([Atom::Gen(Generator::E21(m)), Atom::InvE21(m)]));
        assert_eq!(act_element(&space, &pair, &v).unwrap(), v);
        // uncancelled order
        let mut pair2 = AlgElement::zero();
        pair2.add_term(Word::empty(), RatFunc::one());
        assert_eq!(act_element(&space, &pair2, &v).unwrap(), v);
    }

    #[test]
    fn inverse_outside_localized_is_rejected() {
        let u = AlgElement::<RatFunc>::inv_e21(g(1, 0));
        assert_eq!(
            act_element(&plain(), &u, &MVector::one()),
            Err(Error::InverseOutsideLocalized(g(1, 0)))
        );
        let space = ModuleSpace::localized(ParamEnv::symbolic(), g(0, 1));
        assert!(matches!(
            act_element(&space, &u, &MVector::one()),
            Err(Error::InverseMismatch { .. })
        ));
    }

    #[test]
    fn composition_matches_lemma_item_one() {
        // E12(-m) E21(m) on x_m^{-1} equals E12(-m) on 1, which is zero
        let m = g(1, 1);
        let space = ModuleSpace::localized(ParamEnv::symbolic(), m);
        let u = AlgElement::gen(Generator::E12(-m)).mul(&AlgElement::gen(Generator::E21(m)));
        let v = MVector::monomial(Monomial::power(m, -1));
        assert!(act_element(&space, &u, &v).unwrap().is_zero());
        // and on x_m^{-2}: (-mu-2) q^{-1} x_m^{-2}
        let v = MVector::monomial(Monomial::power(m, -2));
        let want = MVector::term(
            Monomial::power(m, -2),
            -(mu() + int(2)) * q().inv().unwrap(),
        );
        assert_eq!(act_element(&space, &u, &v).unwrap(), want);
    }

    #[test]
    fn apply_e_examples() {
        let env = ParamEnv::symbolic();
        let m = g(1, 0);
        let v = MVector::monomial(mono(&[((0, 1), 2)]));
        let got = apply_e(m, &v, &env);
        assert_eq!(
            got,
            MVector::term(Monomial::var(g(-1, 2)), int(2) * q().inv().unwrap())
        );
        assert!(apply_e(m, &MVector::one(), &env).is_zero());
        let v = MVector::monomial(mono(&[((0, 1), 2), ((1, 1), 1)]));
        assert!(apply_e_power(m, 4, &v, &env).is_zero());
    }

    #[test]
    fn e12_splits_into_derivative_and_e_operator() {
        let env = ParamEnv::symbolic();
        let m = g(1, -1);
        let space = ModuleSpace::localized(env.clone(), m);
        let v = MVector::monomial(mono(&[((1, -1), -2), ((0, 1), 2), ((2, 0), 1)]));
        let lhs = act_generator(&space, Generator::E12(-m), &v).unwrap();
        let rhs = v
            .partial(m)
            .scale(&(env.q_power(1) * mu()))
            .sub(&apply_e(m, &v, &env));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn weights() {
        let space = plain();
        let w = weight_of(&space, &MVector::var(g(1, 0))).unwrap();
        assert_eq!(
            w,
            WeightValue {
                e11: mu() - int(1),
                e22: int(1),
                d1: int(1),
                d2: int(0)
            }
        );
        let w = weight_of(&space, &MVector::one()).unwrap();
        assert_eq!(w.e11, mu());
        assert!(w.e22.is_zero() && w.d1.is_zero() && w.d2.is_zero());

        let m = g(1, 0);
        let tw = ModuleSpace::twisted(ParamEnv::symbolic(), m).unwrap();
        let d = 3;
        let w = weight_of(&tw, &MVector::monomial(Monomial::power(m, d))).unwrap();
        assert_eq!(w.e11 - w.e22, mu() - int(2 * d) + int(2) * b());
    }

    #[test]
    fn non_weight_vector_is_reported() {
        let space = plain();
        let v = MVector::<RatFunc>::var(g(1, 0)).add(&MVector::var(g(0, 1)));
        assert_eq!(
            weight_of(&space, &v),
            Err(Error::NotWeightVector {
                generator: "D1".into()
            })
        );
    }

    #[test]
    fn rational_backend_twisted_example() {
        let env = ParamEnv::rational(ratio(2, 1), ratio(1, 3), Some(ratio(1, 5))).unwrap();
        let space = ModuleSpace::twisted(env, g(1, 0)).unwrap();
        let v = MVector::monomial(Monomial::power(g(1, 0), 3));
        let got = act_generator(&space, Generator::E12(g(-1, 0)), &v).unwrap();
        assert_eq!(
            got,
            MVector::term(Monomial::power(g(1, 0), 2), Rat::from(ratio(-308, 75)))
        );
        assert_eq!(got.to_string(), "-308/75*x[1,0]^2");
    }
}
