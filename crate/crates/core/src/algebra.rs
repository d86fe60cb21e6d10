//! The Lie algebra `gl2(C_q) + C d1 + C d2`, words in its enveloping algebra localized
//! at `e21(m)`, and the twisting automorphism `Theta_b`.
//!
//! Words are never normal-ordered. Two elements that differ as words may still act
//! identically; semantic equality is checked through [`crate::action`].

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{write_coefficient, GridIndex};
use crate::scalar::{binom, ParamEnv, Scalar};

/// `e_ij(n)` or one of the degree derivations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E11(GridIndex),
    E12(GridIndex),
    E21(GridIndex),
    E22(GridIndex),
    D1,
    D2,
}

impl Generator {
    /// `(i, j, n)` for `e_ij(n)`.
    pub fn matrix_unit(self) -> Option<(u8, u8, GridIndex)> {
        match self {
            Generator::E11(n) => Some((1, 1, n)),
            Generator::E12(n) => Some((1, 2, n)),
            Generator::E21(n) => Some((2, 1, n)),
            Generator::E22(n) => Some((2, 2, n)),
            Generator::D1 | Generator::D2 => None,
        }
    }

    pub fn from_matrix_unit(i: u8, j: u8, n: GridIndex) -> Generator {
        match (i, j) {
            (1, 1) => Generator::E11(n),
            (1, 2) => Generator::E12(n),
            (2, 1) => Generator::E21(n),
            (2, 2) => Generator::E22(n),
            _ => unreachable!("matrix units are 2x2"),
        }
    }

    /// The Z^2-degree of the generator (zero for the derivations).
    pub fn degree(self) -> GridIndex {
        self.matrix_unit()
            .map(|(_, _, n)| n)
            .unwrap_or(GridIndex::ZERO)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.matrix_unit() {
            Some((i, j, n)) => write!(f, "E{i}{j}({},{})", n.m1, n.m2),
            None if *self == Generator::D1 => write!(f, "D1"),
            None => write!(f, "D2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Gen(Generator),
    /// `e21(m)^{-1}`.
    InvE21(GridIndex),
}

impl Atom {
    fn cancels(self, next: Atom) -> bool {
        match (self, next) {
            (Atom::Gen(Generator::E21(a)), Atom::InvE21(b))
            | (Atom::InvE21(a), Atom::Gen(Generator::E21(b))) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Gen(g) => write!(f, "{g}"),
            Atom::InvE21(m) => write!(f, "E21({},{})^-1", m.m1, m.m2),
        }
    }
}

/// A product of atoms, read left to right; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Atom>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word, cancelling adjacent `e21(m) e21(m)^{-1}` pairs.
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Self {
        let mut stack: Vec<Atom> = Vec::new();
        for a in atoms {
            match stack.last() {
                Some(&top) if top.cancels(a) => {
                    stack.pop();
                }
                _ => stack.push(a),
            }
        }
        Word(stack)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::new(self.0.iter().chain(other.0.iter()).copied())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let a = self.0[i];
            let run = self.0[i..].iter().take_while(|&&b| b == a).count();
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match (a, run) {
                (_, 1) => write!(f, "{a}")?,
                (Atom::InvE21(m), k) => write!(f, "E21({},{})^-{k}", m.m1, m.m2)?,
                (Atom::Gen(g), k) => write!(f, "{g}^{k}")?,
            }
            i += run;
        }
        Ok(())
    }
}

/// A finite linear combination of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgElement<F> {
    terms: BTreeMap<Word, F>,
}

impl<F: Scalar> Default for AlgElement<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> AlgElement<F> {
    pub fn zero() -> Self {
        AlgElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::scalar(F::one())
    }

    pub fn scalar(c: F) -> Self {
        Self::term(Word::empty(), c)
    }

    pub fn term(w: Word, c: F) -> Self {
        let mut out = Self::zero();
        out.add_term(w, c);
        out
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, F::one())
    }

    pub fn gen(g: Generator) -> Self {
        Self::word(Word::new([Atom::Gen(g)]))
    }

    pub fn inv_e21(m: GridIndex) -> Self {
        Self::word(Word::new([Atom::InvE21(m)]))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        let w = Word::new(w.0);
        match self.terms.remove(&w) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &AlgElement<F>) -> AlgElement<F> {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgElement<F>) -> AlgElement<F> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> AlgElement<F> {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> AlgElement<F> {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Product in the localized enveloping algebra: bilinear concatenation.
    pub fn mul(&self, other: &AlgElement<F>) -> AlgElement<F> {
        let mut out = Self::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1.clone() * c2.clone());
            }
        }
        out
    }

    /// The generator combination, if every word is a single generator.
    pub fn as_generator_combination(&self) -> Option<Vec<(Generator, F)>> {
        self.terms
            .iter()
            .map(|(w, c)| match w.atoms() {
                [Atom::Gen(g)] => Some((*g, c.clone())),
                _ => None,
            })
            .collect()
    }
}

impl<F: Scalar> fmt::Display for AlgElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let body = if w.is_empty() {
                String::new()
            } else {
                w.to_string()
            };
            write_coefficient(f, i == 0, c, &body)?;
        }
        Ok(())
    }
}

pub fn word_mul<F: Scalar>(u: &AlgElement<F>, v: &AlgElement<F>) -> AlgElement<F> {
    u.mul(v)
}

/// Lie bracket of two generators:
/// `[e_ij(m), e_kl(n)] = d_jk q^{m2 n1} e_il(m+n) - d_il q^{n2 m1} e_kj(m+n)`,
/// `[d_i, X(n)] = n_i X(n)`, `[d1, d2] = 0`.
pub fn bracket<F: Scalar>(g: Generator, h: Generator, env: &ParamEnv<F>) -> AlgElement<F> {
    use Generator::{D1, D2};
    let mut out = AlgElement::zero();
    match (g, h) {
        (D1 | D2, D1 | D2) => {}
        (D1, x) => out.add_term(gen_word(x), F::from_i64(x.degree().m1)),
        (D2, x) => out.add_term(gen_word(x), F::from_i64(x.degree().m2)),
        (x, D1) => out.add_term(gen_word(x), F::from_i64(-x.degree().m1)),
        (x, D2) => out.add_term(gen_word(x), F::from_i64(-x.degree().m2)),
        (x, y) => {
            let (i, j, m) = x.matrix_unit().expect("matrix unit");
            let (k, l, n) = y.matrix_unit().expect("matrix unit");
            if j == k {
                out.add_term(
                    gen_word(Generator::from_matrix_unit(i, l, m + n)),
                    env.q_power(m.m2 * n.m1),
                );
            }
            if i == l {
                out.add_term(
                    gen_word(Generator::from_matrix_unit(k, j, m + n)),
                    -env.q_power(n.m2 * m.m1),
                );
            }
        }
    }
    out
}

/// Extends the bracket linearly in its second argument, which must be a generator combination.
pub fn bracket_with<F: Scalar>(
    g: Generator,
    u: &AlgElement<F>,
    env: &ParamEnv<F>,
) -> Option<AlgElement<F>> {
    let mut out = AlgElement::zero();
    for (h, c) in u.as_generator_combination()? {
        out = out.add(&bracket(g, h, env).scale(&c));
    }
    Some(out)
}

fn gen_word(g: Generator) -> Word {
    Word(vec![Atom::Gen(g)])
}

/// `ad e21(m)` applied word by word through the Leibniz rule.
pub fn ad_e21<F: Scalar>(
    m: GridIndex,
    u: &AlgElement<F>,
    env: &ParamEnv<F>,
) -> Result<AlgElement<F>> {
    let e21m = Generator::E21(m);
    let mut out = AlgElement::zero();
    for (w, c) in &u.terms {
        for (pos, atom) in w.0.iter().enumerate() {
            match *atom {
                Atom::InvE21(m2) if m2 == m => {}
                Atom::InvE21(m2) => {
                    return Err(Error::InverseMismatch {
                        found: m2,
                        expected: m,
                    })
                }
                Atom::Gen(h) => {
                    for (bw, bc) in bracket(e21m, h, env).terms {
                        let mut atoms = w.0[..pos].to_vec();
                        atoms.extend_from_slice(&bw.0);
                        atoms.extend_from_slice(&w.0[pos + 1..]);
                        out.add_term(Word(atoms), c.clone() * bc);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Theta_b(u) = sum_j binom(b, j) (ad e21(m))^j (u) e21(m)^{-j}`, summed until the
/// iterated adjoint vanishes.
pub fn theta_series<F: Scalar>(
    u: &AlgElement<F>,
    b: &F,
    m: GridIndex,
    env: &ParamEnv<F>,
) -> Result<AlgElement<F>> {
    let bound = 3 * u.max_word_len() + 1;
    let mut out = AlgElement::zero();
    let mut current = u.clone();
    let mut inverse_power = AlgElement::one();
    let mut j: u32 = 0;
    while !current.is_zero() {
        if j as usize > bound {
            return Err(Error::NilpotencyBound { bound });
        }
        let coeff = binom(b, j);
        out = out.add(&current.mul(&inverse_power).scale(&coeff));
        current = ad_e21(m, &current, env)?;
        inverse_power = inverse_power.mul(&AlgElement::inv_e21(m));
        j += 1;
    }
    Ok(out)
}

/// Closed forms of `Theta_b` on the generators.
pub fn theta_closed<F: Scalar>(
    g: Generator,
    b: &F,
    m: GridIndex,
    env: &ParamEnv<F>,
) -> AlgElement<F> {
    let inv = Atom::InvE21(m);
    let gen = |g: Generator| Atom::Gen(g);
    let mut out = AlgElement::gen(g);
    match g {
        Generator::E21(_) => {}
        Generator::E12(n) => {
            out.add_term(
                Word::new([gen(Generator::E22(m + n)), inv]),
                b.clone() * env.q_power(m.m2 * n.m1),
            );
            out.add_term(
                Word::new([gen(Generator::E11(m + n)), inv]),
                -(b.clone() * env.q_power(m.m1 * n.m2)),
            );
            out.add_term(
                Word::new([gen(Generator::E21(m.scaled(2) + n)), inv, inv]),
                -(b.clone()
                    * (b.clone() - F::one())
                    * env.q_power(m.m2 * n.m1 + m.m2 * m.m1 + m.m1 * n.m2)),
            );
        }
        Generator::E11(n) => {
            out.add_term(
                Word::new([gen(Generator::E21(m + n)), inv]),
                b.clone() * env.q_power(m.m2 * n.m1),
            );
        }
        Generator::E22(n) => {
            out.add_term(
                Word::new([gen(Generator::E21(m + n)), inv]),
                -(b.clone() * env.q_power(m.m1 * n.m2)),
            );
        }
        Generator::D1 => out.add_term(Word::empty(), -(b.clone() * F::from_i64(m.m1))),
        Generator::D2 => out.add_term(Word::empty(), -(b.clone() * F::from_i64(m.m2))),
    }
    out
}
