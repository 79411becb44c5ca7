//! Square classes `K*/K*²` as vectors over `F2`.
//!
//! A class is the set of basis elements appearing to an odd power in the
//! factorization of a representative. Addition in `K*/K*²` is symmetric
//! difference. Pairs of classes model `(K*/K*²)²`, the target of the descent
//! map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::error::{invalid, Result};
use crate::exactalg::{int_factor, poly_factor, Polynomial, Rational, RationalFunction};

/// Which field the classes live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldMode {
    /// `Q(t)`: basis −1, rational primes, monic irreducibles.
    RationalConstants,
    /// `C(t)`: constants are squares; basis monic irreducibles over `Q`.
    ///
    /// Distinct `Q`-irreducibles have disjoint roots over `C`, so this basis
    /// embeds injectively into `C(t)*/C(t)*²` for functions defined over `Q`.
    ConstantsAreSquares,
    /// `Q`: basis −1 and primes.
    RationalsOnly,
}

impl fmt::Display for FieldMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldMode::RationalConstants => "Q(t)",
            FieldMode::ConstantsAreSquares => "C(t)",
            FieldMode::RationalsOnly => "Q",
        })
    }
}

/// A basis vector of a square-class group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    MinusOne,
    Prime(BigInt),
    Irreducible(Polynomial),
}

impl BasisElement {
    fn is_constant(&self) -> bool {
        !matches!(self, BasisElement::Irreducible(_))
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::MinusOne => write!(f, "-1"),
            BasisElement::Prime(p) => write!(f, "{p}"),
            BasisElement::Irreducible(pi) => write!(f, "{pi}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClassVector {
    mode: FieldMode,
    coords: BTreeSet<BasisElement>,
}

impl SquareClassVector {
    pub fn zero(mode: FieldMode) -> Self {
        SquareClassVector {
            mode,
            coords: BTreeSet::new(),
        }
    }

    pub fn from_basis(
        mode: FieldMode,
        elems: impl IntoIterator<Item = BasisElement>,
    ) -> Result<Self> {
        let mut v = Self::zero(mode);
        for e in elems {
            match (mode, &e) {
                (FieldMode::ConstantsAreSquares, b) if b.is_constant() => {
                    return invalid(format!("constant basis element {b} in C(t) mode"))
                }
                (FieldMode::RationalsOnly, BasisElement::Irreducible(_)) => {
                    return invalid(format!("polynomial basis element {e} in Q mode"))
                }
                _ => v.toggle(e),
            }
        }
        Ok(v)
    }

    pub fn mode(&self) -> FieldMode {
        self.mode
    }

    pub fn coords(&self) -> &BTreeSet<BasisElement> {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    fn toggle(&mut self, e: BasisElement) {
        if !self.coords.remove(&e) {
            self.coords.insert(e);
        }
    }

    /// Group law. Fails when the modes differ.
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_modes(self.mode, other.mode)?;
        Ok(SquareClassVector {
            mode: self.mode,
            coords: self
                .coords
                .symmetric_difference(&other.coords)
                .cloned()
                .collect(),
        })
    }

    /// Drops constant coordinates, mapping a `Q(t)` class to its `C(t)` image.
    pub fn forget_constants(&self) -> Self {
        SquareClassVector {
            mode: FieldMode::ConstantsAreSquares,
            coords: self
                .coords
                .iter()
                .filter(|e| !e.is_constant())
                .cloned()
                .collect(),
        }
    }
}

impl fmt::Display for SquareClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "{{}}");
        }
        let items: Vec<String> = self.coords.iter().map(|e| e.to_string()).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

fn check_modes(a: FieldMode, b: FieldMode) -> Result<()> {
    if a != b {
        return invalid(format!("mixed square-class modes {a} and {b}"));
    }
    Ok(())
}

fn toggle_rational(v: &mut SquareClassVector, c: &Rational) -> Result<()> {
    if c.is_negative() {
        v.toggle(BasisElement::MinusOne);
    }
    for part in [c.numer(), c.denom()] {
        for (p, e) in int_factor(part)?.factors {
            if e % 2 == 1 {
                v.toggle(BasisElement::Prime(p));
            }
        }
    }
    Ok(())
}

/// Square class of a nonzero rational.
pub fn class_of_rational(c: &Rational) -> Result<SquareClassVector> {
    if num_traits::Zero::is_zero(c) {
        return invalid("square class of zero");
    }
    let mut v = SquareClassVector::zero(FieldMode::RationalsOnly);
    toggle_rational(&mut v, c)?;
    Ok(v)
}

/// Square class of a nonzero rational function in the given mode.
///
/// In [`FieldMode::RationalsOnly`] the function must be constant.
pub fn class_of(f: &RationalFunction, mode: FieldMode) -> Result<SquareClassVector> {
    if f.is_zero() {
        return invalid("square class of zero");
    }
    if mode == FieldMode::RationalsOnly {
        if !f.is_constant() {
            return invalid(format!("{f} is not a constant"));
        }
        return class_of_rational(&f.numerator().leading());
    }
    let mut v = SquareClassVector::zero(mode);
    let mut unit = Rational::from_integer(1.into());
    for part in [f.numerator(), f.denominator()] {
        let fac = poly_factor(part)?;
        unit *= fac.unit;
        for (pi, e) in fac.factors {
            if e % 2 == 1 {
                v.toggle(BasisElement::Irreducible(pi));
            }
        }
    }
    if mode == FieldMode::RationalConstants {
        toggle_rational(&mut v, &unit)?;
    }
    Ok(v)
}

/// An element of `(K*/K*²)²`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescentPair {
    pub first: SquareClassVector,
    pub second: SquareClassVector,
}

impl DescentPair {
    pub fn new(first: SquareClassVector, second: SquareClassVector) -> Result<Self> {
        check_modes(first.mode, second.mode)?;
        Ok(DescentPair { first, second })
    }

    pub fn zero(mode: FieldMode) -> Self {
        DescentPair {
            first: SquareClassVector::zero(mode),
            second: SquareClassVector::zero(mode),
        }
    }

    pub fn of(f: &RationalFunction, g: &RationalFunction, mode: FieldMode) -> Result<Self> {
        Self::new(class_of(f, mode)?, class_of(g, mode)?)
    }

    pub fn mode(&self) -> FieldMode {
        self.first.mode
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(DescentPair {
            first: self.first.add(&other.first)?,
            second: self.second.add(&other.second)?,
        })
    }
}

impl fmt::Display for DescentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Outcome of a span-membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanCertificate {
    pub in_span: bool,
    /// When in the span: which generators sum to the target.
    pub combination: Option<Vec<bool>>,
}

/// Pairs flattened into bit rows over a shared coordinate index.
struct Rows {
    rows: Vec<Vec<bool>>,
}

impl Rows {
    fn build(pairs: &[&DescentPair]) -> Rows {
        let mut index: BTreeMap<(u8, &BasisElement), usize> = BTreeMap::new();
        for p in pairs {
            for (side, v) in [(0u8, &p.first), (1u8, &p.second)] {
                for e in &v.coords {
                    let n = index.len();
                    index.entry((side, e)).or_insert(n);
                }
            }
        }
        let rows = pairs
            .iter()
            .map(|p| {
                let mut row = vec![false; index.len()];
                for (side, v) in [(0u8, &p.first), (1u8, &p.second)] {
                    for e in &v.coords {
                        row[index[&(side, e)]] = true;
                    }
                }
                row
            })
            .collect();
        Rows { rows }
    }
}

fn xor_into(dst: &mut [bool], src: &[bool]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

fn shared_mode(pairs: &[&DescentPair]) -> Result<()> {
    if let Some(first) = pairs.first() {
        for p in pairs {
            check_modes(first.mode(), p.mode())?;
        }
    }
    Ok(())
}

/// Decides whether `target` is an `F2`-combination of `generators`.
pub fn in_span(target: &DescentPair, generators: &[DescentPair]) -> Result<SpanCertificate> {
    let mut all: Vec<&DescentPair> = generators.iter().collect();
    all.push(target);
    shared_mode(&all)?;
    let Rows { rows } = Rows::build(&all);
    let k = generators.len();
    let width = rows.first().map_or(0, Vec::len);

    // Gaussian elimination, tracking which generators make up each reduced row.
    let mut basis: Vec<(usize, Vec<bool>, Vec<bool>)> = Vec::new();
    for (i, row) in rows[..k].iter().enumerate() {
        let mut r = row.clone();
        let mut combo = vec![false; k];
        combo[i] = true;
        for (pivot, br, bc) in &basis {
            if r[*pivot] {
                xor_into(&mut r, br);
                xor_into(&mut combo, bc);
            }
        }
        if let Some(pivot) = (0..width).find(|&j| r[j]) {
            basis.push((pivot, r, combo));
        }
    }
    let mut r = rows[k].clone();
    let mut combo = vec![false; k];
    for (pivot, br, bc) in &basis {
        if r[*pivot] {
            xor_into(&mut r, br);
            xor_into(&mut combo, bc);
        }
    }
    let in_span = r.iter().all(|b| !b);
    Ok(SpanCertificate {
        in_span,
        combination: in_span.then_some(combo),
    })
}

/// True iff no nonempty `F2`-combination of the vectors vanishes.
pub fn independent(vectors: &[DescentPair]) -> Result<bool> {
    let all: Vec<&DescentPair> = vectors.iter().collect();
    shared_mode(&all)?;
    Ok(rank(&all) == vectors.len())
}

fn rank(pairs: &[&DescentPair]) -> usize {
    let Rows { mut rows } = Rows::build(pairs);
    let width = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..width {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col]) else {
            continue;
        };
        rows.swap(r, piv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] {
                xor_into(row, &pivot_row);
            }
        }
        r += 1;
    }
    r
}
