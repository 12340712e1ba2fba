//! Gauge-invariant potential terms built from bilinears `(φa†φb)`, their
//! charges under the torus, and the decomposition `X = c·A`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{lattice::unimodular_inverse, IntMatrix};
use crate::torus::TorusBasis;

/// A quadratic `(φa†φb)` or quartic `(φa†φb)(φc†φd)` term with 0-based
/// doublet indices. Quartic factors are kept sorted. Diagonal factors are
/// allowed here; [`Monomial`] is the charged subset used for classification.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Term {
    factors: Vec<(usize, usize)>,
}

impl Term {
    pub fn new(mut factors: Vec<(usize, usize)>) -> Result<Self> {
        if factors.is_empty() || factors.len() > 2 {
            return Err(Error::InvalidMonomial(format!(
                "expected one or two bilinears, got {}",
                factors.len()
            )));
        }
        factors.sort();
        Ok(Term { factors })
    }

    pub fn quadratic(a: usize, b: usize) -> Self {
        Term {
            factors: vec![(a, b)],
        }
    }

    pub fn quartic(f: (usize, usize), g: (usize, usize)) -> Self {
        let mut factors = vec![f, g];
        factors.sort();
        Term { factors }
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        &self.factors
    }

    pub fn is_quartic(&self) -> bool {
        self.factors.len() == 2
    }

    pub fn max_index(&self) -> usize {
        self.factors
            .iter()
            .map(|&(a, b)| a.max(b))
            .max()
            .unwrap_or(0)
    }

    pub fn conjugate(&self) -> Self {
        let mut factors: Vec<_> = self.factors.iter().map(|&(a, b)| (b, a)).collect();
        factors.sort();
        Term { factors }
    }

    pub fn is_self_conjugate(&self) -> bool {
        self.conjugate() == *self
    }

    /// The lexicographically smaller of the term and its conjugate.
    pub fn canonical(&self) -> Self {
        let c = self.conjugate();
        if c < *self {
            c
        } else {
            self.clone()
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self <= self.conjugate()
    }

    /// Net power of each doublet: `+1` for every `φb`, `−1` for every `φa†`.
    /// Always sums to zero.
    pub fn exponents(&self, n_doublets: usize) -> Vec<i64> {
        let mut m = vec![0; n_doublets];
        for &(a, b) in &self.factors {
            m[a] -= 1;
            m[b] += 1;
        }
        m
    }

    pub fn is_neutral(&self) -> bool {
        let n = self.max_index() + 1;
        self.exponents(n).iter().all(|&x| x == 0)
    }

    /// Image under a relabelling of doublets `i -> perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut factors: Vec<_> = self
            .factors
            .iter()
            .map(|&(a, b)| (perm[a], perm[b]))
            .collect();
        factors.sort();
        Term { factors }
    }

    pub fn render(&self, style: RenderStyle) -> String {
        let one = |&(a, b): &(usize, usize)| match style {
            RenderStyle::Ascii => format!("(f{}+ f{})", a + 1, b + 1),
            RenderStyle::Unicode => format!("(φ{}†φ{})", a + 1, b + 1),
        };
        match self.factors.as_slice() {
            [f, g] if f == g => match style {
                RenderStyle::Ascii => format!("{}^2", one(f)),
                RenderStyle::Unicode => format!("{}²", one(f)),
            },
            fs => fs.iter().map(one).collect(),
        }
    }

    /// Conventional coefficient name: `m11^2`, `λ12`, `λ'12` for the
    /// neutral terms, `m12^2` and `λ1323` for charged ones.
    pub fn coefficient_name(&self) -> String {
        let i = |x: usize| x + 1;
        match self.factors.as_slice() {
            [(a, b)] => format!("m{}{}^2", i(*a), i(*b)),
            [(a, b), (c, d)] if a == b && c == d => format!("λ{}{}", i(*a), i(*c)),
            [(a, b), (c, d)] if a == d && b == c => {
                format!("λ'{}{}", i(*a.min(b)), i(*a.max(b)))
            }
            [(a, b), (c, d)] => format!("λ{}{}{}{}", i(*a), i(*b), i(*c), i(*d)),
            _ => unreachable!("terms have one or two factors"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum RenderStyle {
    Ascii,
    #[default]
    Unicode,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(RenderStyle::Unicode))
    }
}

/// A charged term built only from off-diagonal bilinears. The orientation
/// given at construction is kept (it fixes the sign of the charge);
/// [`Monomial::canonical`] picks the representative up to conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct Monomial(Term);

impl Monomial {
    pub fn new(factors: Vec<(usize, usize)>) -> Result<Self> {
        let term = Term::new(factors)?;
        if term.factors.iter().any(|&(a, b)| a == b) {
            return Err(Error::InvalidMonomial(format!(
                "{term} has a diagonal factor"
            )));
        }
        if term.is_neutral() {
            return Err(Error::InvalidMonomial(format!("{term} carries no charge")));
        }
        Ok(Monomial(term))
    }

    /// From 1-based `(a, b)` pairs, as written in formulas.
    pub fn from_one_based(pairs: &[(usize, usize)]) -> Result<Self> {
        if pairs.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::InvalidMonomial("doublet indices start at 1".into()));
        }
        Self::new(pairs.iter().map(|&(a, b)| (a - 1, b - 1)).collect())
    }

    pub fn term(&self) -> &Term {
        &self.0
    }

    pub fn factors(&self) -> &[(usize, usize)] {
        self.0.factors()
    }

    pub fn conjugate(&self) -> Self {
        Monomial(self.0.conjugate())
    }

    pub fn canonical(&self) -> Self {
        Monomial(self.0.canonical())
    }

    pub fn is_canonical(&self) -> bool {
        self.0.is_canonical()
    }

    pub fn exponents(&self, n_doublets: usize) -> Vec<i64> {
        self.0.exponents(n_doublets)
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Monomial(self.0.permuted(perm))
    }

    pub fn render(&self, style: RenderStyle) -> String {
        self.0.render(style)
    }
}

impl TryFrom<Vec<(usize, usize)>> for Monomial {
    type Error = Error;

    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::from_one_based(&pairs)
    }
}

impl From<Monomial> for Vec<(usize, usize)> {
    fn from(m: Monomial) -> Self {
        m.factors().iter().map(|&(a, b)| (a + 1, b + 1)).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All canonical monomials for `n_doublets`, bilinears first, then products,
/// each group in lexicographic order.
pub fn enumerate_monomials(n_doublets: usize) -> Vec<Monomial> {
    let bilinears: Vec<(usize, usize)> = (0..n_doublets)
        .flat_map(|a| {
            (0..n_doublets)
                .filter(move |&b| b != a)
                .map(move |b| (a, b))
        })
        .collect();
    let mut out: Vec<Monomial> = bilinears
        .iter()
        .filter(|&&(a, b)| a < b)
        .map(|&f| Monomial(Term::quadratic(f.0, f.1)))
        .collect();
    let mut products = Vec::new();
    for (i, &f) in bilinears.iter().enumerate() {
        for &g in &bilinears[i..] {
            let t = Term::quartic(f, g);
            if t.is_canonical() && !t.is_neutral() {
                products.push(Monomial(t));
            }
        }
    }
    products.sort();
    products.dedup();
    out.extend(products);
    out
}

/// Integer charges of a monomial: coefficient of each torus angle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChargeVector(#[serde(with = "crate::serde_util::bigint_vec")] pub Vec<BigInt>);

impl ChargeVector {
    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }
}

impl fmt::Display for ChargeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn charge_vector(m: &Monomial, basis: &TorusBasis) -> ChargeVector {
    ChargeVector(basis.charge_of_exponents(&m.exponents(basis.n_doublets())))
}

/// Rows are the charge vectors of `terms`, in order.
pub fn build_x_matrix(terms: &[Monomial], basis: &TorusBasis) -> IntMatrix {
    IntMatrix::from_rows_with_cols(basis.dim(), terms.iter().map(|t| charge_vector(t, basis).0))
        .expect("charge vectors have one entry per angle")
}

/// Row `i` is the charge of `(φ1†φ_{i+2})` (0-based `i`); determinant 1.
pub fn a_matrix(n_doublets: usize) -> Result<IntMatrix> {
    let basis = TorusBasis::new(n_doublets)?;
    let rows: Vec<Monomial> = (1..n_doublets)
        .map(|b| Monomial(Term::quadratic(0, b)))
        .collect();
    Ok(build_x_matrix(&rows, &basis))
}

/// Shape class of a row of `c` up to permutation and overall sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RowType {
    Type(u8),
    Invalid,
}

const ROW_PATTERNS: [&[i64]; 9] = [
    &[1],
    &[2],
    &[1, 1],
    &[1, -1],
    &[2, -1],
    &[1, 1, -1],
    &[2, -2],
    &[2, -1, -1],
    &[1, 1, -1, -1],
];

pub fn classify_row(row: &[BigInt]) -> RowType {
    let shape = |sign: i64| -> Option<Vec<i64>> {
        let mut v = Vec::new();
        for x in row.iter().filter(|x| !x.is_zero()) {
            if x.abs() > BigInt::from(2) {
                return None;
            }
            v.push(sign * i64::try_from(x).expect("small entry"));
        }
        v.sort_by(|a, b| b.cmp(a));
        Some(v)
    };
    for sign in [1, -1] {
        if let Some(s) = shape(sign) {
            if let Some(k) = ROW_PATTERNS.iter().position(|p| *p == s.as_slice()) {
                return RowType::Type(k as u8 + 1);
            }
        }
    }
    RowType::Invalid
}

impl RowType {
    pub fn is_valid(self) -> bool {
        matches!(self, RowType::Type(_))
    }
}

/// Solves `c·A = x` and classifies each row of `c`.
pub fn c_decompose(x: &IntMatrix, n_doublets: usize) -> Result<(IntMatrix, Vec<RowType>)> {
    let a = a_matrix(n_doublets)?;
    if x.cols() != a.rows() {
        return Err(Error::Dimension {
            expected: a.rows(),
            found: x.cols(),
        });
    }
    let inv = unimodular_inverse(&a).expect("A has determinant 1");
    let c = x.checked_mul(&inv).expect("shapes checked above");
    let types = (0..c.rows()).map(|i| classify_row(c.row(i))).collect();
    Ok((c, types))
}

/// Text of the most general potential invariant under the whole torus.
pub fn backbone_text(n_doublets: usize, style: RenderStyle) -> String {
    let mut parts = Vec::new();
    let name = |t: &Term| match style {
        RenderStyle::Unicode => t.coefficient_name(),
        RenderStyle::Ascii => t.coefficient_name().replace('λ', "lam"),
    };
    for a in 0..n_doublets {
        let t = Term::quadratic(a, a);
        parts.push(format!("-{} {}", name(&t), t.render(style)));
    }
    for a in 0..n_doublets {
        for b in a..n_doublets {
            let t = Term::quartic((a, a), (b, b));
            parts.push(format!("{} {}", name(&t), t.render(style)));
        }
    }
    for a in 0..n_doublets {
        for b in a + 1..n_doublets {
            let t = Term::quartic((a, b), (b, a));
            parts.push(format!("{} {}", name(&t), t.render(style)));
        }
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn charge_table_three_doublets() {
        let b = TorusBasis::new(3).unwrap();
        let q = |pairs: &[(usize, usize)]| {
            charge_vector(&Monomial::from_one_based(pairs).unwrap(), &b).0
        };
        assert_eq!(q(&[(2, 1)]), ints(&[-2, -1]));
        assert_eq!(q(&[(3, 2)]), ints(&[1, 0]));
        assert_eq!(q(&[(1, 3)]), ints(&[1, 1]));
        assert_eq!(q(&[(1, 2), (1, 3)]), ints(&[3, 2]));
    }

    #[test]
    fn x_matrix_examples() {
        let b = TorusBasis::new(3).unwrap();
        let terms = [
            Monomial::from_one_based(&[(1, 2), (1, 3)]).unwrap(),
            Monomial::from_one_based(&[(2, 1), (2, 3)]).unwrap(),
        ];
        assert_eq!(
            build_x_matrix(&terms, &b),
            IntMatrix::from_rows([[3, 2], [-3, -1]]).unwrap()
        );
        let sq = [Monomial::from_one_based(&[(2, 3), (2, 3)]).unwrap()];
        assert_eq!(
            build_x_matrix(&sq, &b),
            IntMatrix::from_rows([[-2, 0]]).unwrap()
        );
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_monomials(2).len(), 2);
        assert_eq!(enumerate_monomials(3).len(), 12);
        assert_eq!(enumerate_monomials(4).len(), 42);
    }

    #[test]
    fn rejects_uncharged() {
        assert!(Monomial::from_one_based(&[(1, 2), (2, 1)]).is_err());
        assert!(Monomial::from_one_based(&[(1, 1), (2, 3)]).is_err());
        assert!(Monomial::from_one_based(&[(1, 2), (2, 3), (3, 1)]).is_err());
    }

    #[test]
    fn row_types() {
        assert_eq!(classify_row(&ints(&[0, -1])), RowType::Type(1));
        assert_eq!(classify_row(&ints(&[-1, 2, 0, -1])), RowType::Type(8));
        assert_eq!(classify_row(&ints(&[-2, 1])), RowType::Type(5));
        assert_eq!(classify_row(&ints(&[1, 1, 1])), RowType::Invalid);
        assert_eq!(classify_row(&ints(&[3])), RowType::Invalid);
    }

    #[test]
    fn square_decomposes_to_type_two() {
        let b = TorusBasis::new(3).unwrap();
        let x = build_x_matrix(&[Monomial::from_one_based(&[(1, 2), (1, 2)]).unwrap()], &b);
        let (c, t) = c_decompose(&x, 3).unwrap();
        assert_eq!(c.row(0), ints(&[2, 0]).as_slice());
        assert_eq!(t, vec![RowType::Type(2)]);
    }

    #[test]
    fn names_and_rendering() {
        let t = Term::quartic((0, 2), (1, 2));
        assert_eq!(t.coefficient_name(), "λ1323");
        assert_eq!(t.render(RenderStyle::Ascii), "(f1+ f3)(f2+ f3)");
        assert_eq!(Term::quartic((0, 1), (0, 1)).to_string(), "(φ1†φ2)²");
        assert_eq!(Term::quartic((2, 0), (0, 2)).coefficient_name(), "λ'13");
        assert_eq!(Term::quadratic(1, 1).coefficient_name(), "m22^2");
    }
}
