use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

use super::Rat;

/// Name of the constant symbol that always heads a basis.
pub const CONSTANT_SYMBOL: &str = "1";

/// A basis symbol with a closed rational enclosure of its value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub lo: Rat,
    pub hi: Rat,
}

impl Symbol {
    pub fn new(name: impl Into<String>, lo: Rat, hi: Rat) -> Self {
        Symbol { name: name.into(), lo, hi }
    }
}

/// Ordered list of symbols assumed linearly independent over Q.
///
/// The first symbol is the constant `1` with enclosure `[1, 1]`. Independence is part of the
/// input contract and is never verified.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymBasis {
    symbols: Vec<Symbol>,
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SymBasis {
    /// The basis `{1}`: plain rationals.
    pub fn trivial() -> Arc<SymBasis> {
        Arc::new(SymBasis {
            symbols: vec![Symbol::new(CONSTANT_SYMBOL, Rat::one(), Rat::one())],
        })
    }

    /// Builds a basis from the full symbol list, constant first.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Arc<SymBasis>> {
        let first = symbols
            .first()
            .ok_or_else(|| Error::InvalidBasis("empty symbol list".into()))?;
        if first.name != CONSTANT_SYMBOL || !first.lo.is_one() || !first.hi.is_one() {
            return Err(Error::InvalidBasis(
                "the first symbol must be \"1\" with enclosure [1, 1]".into(),
            ));
        }
        for (idx, s) in symbols.iter().enumerate() {
            if idx > 0 && !is_identifier(&s.name) {
                return Err(Error::InvalidBasis(format!("symbol name {:?} is not an identifier", s.name)));
            }
            if s.lo > s.hi {
                return Err(Error::InvalidBasis(format!("empty enclosure for {}", s.name)));
            }
            if symbols[..idx].iter().any(|t| t.name == s.name) {
                return Err(Error::InvalidBasis(format!("duplicate symbol {}", s.name)));
            }
        }
        Ok(Arc::new(SymBasis { symbols }))
    }

    /// Builds `{1} ∪ extra`.
    pub fn with_symbols(extra: Vec<Symbol>) -> Result<Arc<SymBasis>> {
        let mut symbols = vec![Symbol::new(CONSTANT_SYMBOL, Rat::one(), Rat::one())];
        symbols.extend(extra);
        Self::from_symbols(symbols)
    }

    /// Returns a new basis with one more symbol appended.
    pub fn extended(&self, symbol: Symbol) -> Result<Arc<SymBasis>> {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        Self::from_symbols(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

pub(crate) fn same_basis(a: &Arc<SymBasis>, b: &Arc<SymBasis>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// A real number written as a rational combination of basis symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymReal {
    basis: Arc<SymBasis>,
    coeffs: Vec<Rat>,
}

impl SymReal {
    pub fn new(basis: Arc<SymBasis>, coeffs: Vec<Rat>) -> Result<SymReal> {
        if coeffs.len() != basis.len() {
            return Err(Error::DimensionMismatch { expected: basis.len(), found: coeffs.len() });
        }
        Ok(SymReal { basis, coeffs })
    }

    pub fn zero(basis: &Arc<SymBasis>) -> SymReal {
        SymReal { basis: basis.clone(), coeffs: vec![Rat::zero(); basis.len()] }
    }

    pub fn constant(basis: &Arc<SymBasis>, value: Rat) -> SymReal {
        let mut x = SymReal::zero(basis);
        x.coeffs[0] = value;
        x
    }

    pub fn from_int(basis: &Arc<SymBasis>, value: i64) -> SymReal {
        SymReal::constant(basis, Rat::from_integer(value.into()))
    }

    /// The basis symbol at `index` as a real.
    pub fn symbol(basis: &Arc<SymBasis>, index: usize) -> SymReal {
        let mut x = SymReal::zero(basis);
        x.coeffs[index] = Rat::one();
        x
    }

    pub fn basis(&self) -> &Arc<SymBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_basis(&self, other: &SymReal) -> Result<()> {
        if same_basis(&self.basis, &other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    pub fn add(&self, other: &SymReal) -> Result<SymReal> {
        self.check_basis(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(SymReal { basis: self.basis.clone(), coeffs })
    }

    pub fn sub(&self, other: &SymReal) -> Result<SymReal> {
        self.check_basis(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(SymReal { basis: self.basis.clone(), coeffs })
    }

    pub fn neg(&self) -> SymReal {
        SymReal { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale_int(&self, n: &BigInt) -> SymReal {
        let n = Rat::from_integer(n.clone());
        self.scale(&n)
    }

    pub fn scale(&self, r: &Rat) -> SymReal {
        SymReal { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|c| c * r).collect() }
    }

    /// `self + n * other`
    pub fn add_multiple(&self, n: &BigInt, other: &SymReal) -> Result<SymReal> {
        self.check_basis(other)?;
        let n = Rat::from_integer(n.clone());
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + &n * b).collect();
        Ok(SymReal { basis: self.basis.clone(), coeffs })
    }

    /// Rational interval containing the value, from the symbol enclosures.
    pub fn enclosure(&self) -> (Rat, Rat) {
        enclosure_of(self.basis.symbols(), self.coeffs.iter())
    }

    /// Midpoint of the enclosure; only used to steer searches, never to decide.
    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        let (lo, hi) = self.enclosure();
        ((lo + hi) / Rat::from_integer(2.into())).to_f64().unwrap_or(f64::NAN)
    }

    /// Certified comparison. Equality is exact; strict order comes from interval arithmetic.
    pub fn cmp(&self, other: &SymReal) -> Result<Ordering> {
        self.check_basis(other)?;
        // Fast path: the difference only involves the constant symbol.
        if self.coeffs[1..] == other.coeffs[1..] {
            return Ok(self.coeffs[0].cmp(&other.coeffs[0]));
        }
        let diff: Vec<Rat> = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        let (lo, hi) = enclosure_of(self.basis.symbols(), diff.iter());
        if lo.is_positive() {
            Ok(Ordering::Greater)
        } else if hi.is_negative() {
            Ok(Ordering::Less)
        } else {
            Err(Error::RefineNeeded { lhs: self.to_string(), rhs: other.to_string() })
        }
    }

    /// Sign of the value, certified.
    pub fn signum(&self) -> Result<Ordering> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            return Ok(self.coeffs[0].cmp(&Rat::zero()));
        }
        let (lo, hi) = self.enclosure();
        if lo.is_positive() {
            Ok(Ordering::Greater)
        } else if hi.is_negative() {
            Ok(Ordering::Less)
        } else {
            Err(Error::RefineNeeded { lhs: self.to_string(), rhs: "0".into() })
        }
    }

    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.signum()? == Ordering::Greater)
    }

    pub fn abs(&self) -> Result<SymReal> {
        Ok(if self.signum()? == Ordering::Less { self.neg() } else { self.clone() })
    }

    pub fn min<'a>(&'a self, other: &'a SymReal) -> Result<&'a SymReal> {
        Ok(if other.cmp(self)? == Ordering::Less { other } else { self })
    }

    pub fn max<'a>(&'a self, other: &'a SymReal) -> Result<&'a SymReal> {
        Ok(if other.cmp(self)? == Ordering::Greater { other } else { self })
    }
}

fn enclosure_of<'a>(symbols: &[Symbol], coeffs: impl Iterator<Item = &'a Rat>) -> (Rat, Rat) {
    let mut lo = Rat::zero();
    let mut hi = Rat::zero();
    for (s, c) in symbols.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        if c.is_positive() {
            lo += c * &s.lo;
            hi += c * &s.hi;
        } else {
            lo += c * &s.hi;
            hi += c * &s.lo;
        }
    }
    (lo, hi)
}

impl fmt::Display for SymReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, c) in self.basis.symbols().iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", sign)?;
            }
            first = false;
            if s.name == CONSTANT_SYMBOL {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", s.name)?;
            } else {
                write!(f, "{}*{}", mag, s.name)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymReal({})", self)
    }
}

/// Sorts ascending with certified comparisons.
pub fn sort_reals(v: &mut [SymReal]) -> Result<()> {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1].cmp(&v[j])? == Ordering::Greater {
            v.swap(j - 1, j);
            j -= 1;
        }
    }
    Ok(())
}

/// Sum of the entries; `basis` is used for the empty sum.
pub fn sum_reals(basis: &Arc<SymBasis>, v: &[SymReal]) -> Result<SymReal> {
    let mut acc = SymReal::zero(basis);
    for x in v {
        acc = acc.add(x)?;
    }
    Ok(acc)
}

/// Index of the first minimal entry.
pub fn argmin(v: &[SymReal]) -> Result<Option<usize>> {
    let mut best: Option<usize> = None;
    for (i, x) in v.iter().enumerate() {
        match best {
            None => best = Some(i),
            Some(b) => {
                if x.cmp(&v[b])? == Ordering::Less {
                    best = Some(i);
                }
            }
        }
    }
    Ok(best)
}

/// The integer `q` with `0 < x - q*y <= y`, for any `x` and positive `y`.
///
/// The enclosure ratio only supplies a first guess; the result is confirmed by certified
/// comparisons, widening from the guess and then bisecting.
pub fn reduce_quotient(x: &SymReal, y: &SymReal) -> Result<BigInt> {
    if !y.is_positive()? {
        return Err(Error::InvalidInput(format!("reduction modulo the non-positive {}", y)));
    }
    let guess = {
        let (xl, xh) = x.enclosure();
        let (yl, yh) = y.enclosure();
        let den = yl + yh;
        if den.is_positive() {
            ((xl + xh) / den).ceil().to_integer() - BigInt::one()
        } else {
            BigInt::zero()
        }
    };
    // x - n*y > 0 holds exactly for n <= q
    let above = |n: &BigInt| -> Result<bool> { Ok(x.add_multiple(&(-n), y)?.signum()? == Ordering::Greater) };
    let limit = 4096;
    let mut step = BigInt::one();
    let (mut lo, mut hi);
    let mut iters = 0;
    if above(&guess)? {
        lo = guess;
        loop {
            hi = &lo + &step;
            if !above(&hi)? {
                break;
            }
            lo = hi;
            step *= 2;
            iters += 1;
            if iters > limit {
                return Err(Error::IterationLimit { limit });
            }
        }
    } else {
        hi = guess;
        loop {
            lo = &hi - &step;
            if above(&lo)? {
                break;
            }
            hi = lo;
            step *= 2;
            iters += 1;
            if iters > limit {
                return Err(Error::IterationLimit { limit });
            }
        }
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) >> 1;
        if above(&mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
