//! Dense univariate polynomials over ℚ with square-free decomposition,
//! Sturm sequences, and real root isolation.
//!
//! Coefficients are stored in ascending degree order and the vector never
//! ends in a zero, so the zero polynomial is the empty vector.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::field::{denominator_lcm, format_rational, rational_to_f64, Field, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn new(coeffs: Vec<Rational>) -> Self {
        Poly { coeffs }.normalize()
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    /// `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Poly {
            coeffs: self.coeffs.iter().map(|c| c / &lc).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + rational_to_f64(c))
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + Complex64::new(rational_to_f64(c), 0.0)
            })
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let lc = divisor.leading();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Exact quotient; debug-asserts the remainder vanishes.
    pub fn exact_div(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scales to integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = denominator_lcm(&self.coeffs);
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        let mut content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if ints.last().is_some_and(Signed::is_negative) {
            content = -content;
        }
        Poly {
            coeffs: ints
                .into_iter()
                .map(|c| Rational::from_integer(c / &content))
                .collect(),
        }
    }

    /// Yun's algorithm: returns `(f_i, i)` with `monic(p) = Π f_i^i`, each
    /// `f_i` monic, square-free, nonconstant, and pairwise coprime.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, usize)> {
        let p = self.monic();
        if p.is_constant() {
            return Vec::new();
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.exact_div(&a0);
        let mut c = dp.exact_div(&a0);
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            b = b.exact_div(&a);
            c = d.exact_div(&a);
            d = &c - &b.derivative();
            if !a.is_constant() {
                out.push((a, i));
            }
            i += 1;
        }
        out
    }

    /// Product of the distinct monic irreducible factors.
    pub fn square_free_part(&self) -> Poly {
        if self.is_constant() {
            return Poly::one();
        }
        self.monic().exact_div(&self.gcd(&self.derivative()))
    }

    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// Writes `self = x^e · r(x²)` if only powers of the parity `e ∈ {0,1}` occur.
    pub fn parity_split(&self) -> Option<(usize, Poly)> {
        let d = self.degree()?;
        let e = d % 2;
        if self
            .coeffs
            .iter()
            .enumerate()
            .any(|(k, c)| k % 2 != e && !c.is_zero())
        {
            return None;
        }
        let r = self.coeffs.iter().skip(e).step_by(2).cloned().collect();
        Some((e, Poly::new(r)))
    }

    /// `p(−x)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Cauchy bound: every complex root has modulus strictly below it.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let max = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &lc)
            .fold(Rational::zero(), |m, v| if v > m { v } else { m });
        max + Rational::one()
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(rational_to_f64).collect()
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (k, mag.is_one()) {
                (0, _) => format_rational(&mag),
                (1, true) => "x".to_string(),
                (1, false) => format!("{}*x", format_rational(&mag)),
                (_, true) => format!("x^{}", k),
                (_, false) => format!("{}*x^{}", format_rational(&mag), k),
            };
            terms.push((sign, body));
        }
        let mut s = String::new();
        for (i, (sign, body)) in terms.iter().enumerate() {
            if i == 0 {
                if *sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {} ", sign));
            }
            s.push_str(body);
        }
        f.write_str(&s)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self)
    }
}

/// Sturm chain of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct SturmSequence {
    chain: Vec<Poly>,
}

impl SturmSequence {
    pub fn new(p: &Poly) -> Self {
        let mut chain = vec![p.clone()];
        if p.is_constant() {
            return SturmSequence { chain };
        }
        let mut prev = p.clone();
        let mut cur = p.derivative();
        while !cur.is_zero() {
            let next = -&prev.rem(&cur);
            chain.push(cur.clone());
            prev = cur;
            // scaling by a positive constant keeps sign variations intact
            cur = scale_positive(&next);
        }
        SturmSequence { chain }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.eval(x).sign(0.0)))
    }

    pub fn variations_at_pos_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| p.leading().sign(0.0)))
    }

    pub fn variations_at_neg_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = p.leading().sign(0.0);
            if p.deg() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Distinct roots in the half-open interval `(a, b]`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn count_real(&self) -> usize {
        self.variations_at_neg_infinity()
            .saturating_sub(self.variations_at_pos_infinity())
    }

    /// Distinct roots in `(-∞, b]`.
    pub fn count_at_most(&self, b: &Rational) -> usize {
        self.variations_at_neg_infinity()
            .saturating_sub(self.variations_at(b))
    }

    /// Distinct roots in `(a, ∞)`.
    pub fn count_above(&self, a: &Rational) -> usize {
        self.variations_at(a)
            .saturating_sub(self.variations_at_pos_infinity())
    }
}

fn scale_positive(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let lcm = denominator_lcm(p.coeffs());
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    Poly::new(
        ints.into_iter()
            .map(|c| Rational::from_integer(c / &content))
            .collect(),
    )
}

/// A real root of a square-free polynomial, isolated in `(lo, hi]` or known exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct RealRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub exact: Option<Rational>,
}

impl RealRoot {
    pub fn approx(&self) -> f64 {
        match &self.exact {
            Some(r) => rational_to_f64(r),
            None => rational_to_f64(&((&self.lo + &self.hi) / Rational::from_int(2))),
        }
    }

    /// Rational point guaranteed to lie strictly below the root.
    pub fn lower_bound(&self) -> Rational {
        match &self.exact {
            Some(r) => r.clone(),
            None => self.lo.clone(),
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// Isolates every real root of a square-free polynomial, sorted ascending.
pub fn isolate_real_roots(p: &Poly) -> Vec<RealRoot> {
    if p.is_constant() {
        return Vec::new();
    }
    let sturm = SturmSequence::new(p);
    let bound = p.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound, sturm.count_real())];
    while let Some((lo, hi, count)) = stack.pop() {
        match count {
            0 => {}
            1 => out.push(RealRoot {
                lo,
                hi,
                exact: None,
            }),
            _ => {
                let mid = split_point(p, &lo, &hi);
                if p.eval(&mid).is_zero() {
                    // split_point only returns a root when it cannot avoid one
                    out.push(RealRoot {
                        lo: mid.clone(),
                        hi: mid.clone(),
                        exact: Some(mid.clone()),
                    });
                    let mut eps = (&hi - &lo) / Rational::from_int(4);
                    let (below, above) = loop {
                        let below = &mid - &eps;
                        let above = &mid + &eps;
                        if !p.eval(&below).is_zero()
                            && !p.eval(&above).is_zero()
                            && sturm.count_in(&below, &above) == 1
                        {
                            break (below, above);
                        }
                        eps /= Rational::from_int(2);
                    };
                    stack.push((lo.clone(), below.clone(), sturm.count_in(&lo, &below)));
                    stack.push((above.clone(), hi.clone(), sturm.count_in(&above, &hi)));
                } else {
                    let left = sturm.count_in(&lo, &mid);
                    stack.push((mid.clone(), hi, count - left));
                    stack.push((lo, mid, left));
                }
            }
        }
    }
    out.sort_by(|a, b| a.lower_bound().cmp(&b.lower_bound()));
    for r in &mut out {
        if r.exact.is_none() {
            r.exact = recover_rational_root(p, r);
        }
    }
    out
}

/// Midpoint, nudged off any exact root when possible.
fn split_point(p: &Poly, lo: &Rational, hi: &Rational) -> Rational {
    let two = Rational::from_int(2);
    let mid = (lo + hi) / &two;
    if !p.eval(&mid).is_zero() {
        return mid;
    }
    for k in [3, 5, 7, 11] {
        let cand = lo + (hi - lo) * Rational::new(BigInt::from(k - 1), BigInt::from(2 * k));
        if !p.eval(&cand).is_zero() {
            return cand;
        }
    }
    mid
}

/// Shrinks an isolating interval by bisection until its width is at most `width`.
pub fn refine_root(p: &Poly, root: &RealRoot, width: &Rational) -> RealRoot {
    if root.exact.is_some() {
        return root.clone();
    }
    let mut lo = root.lo.clone();
    let mut hi = root.hi.clone();
    if p.eval(&hi).is_zero() {
        return RealRoot {
            lo: hi.clone(),
            hi: hi.clone(),
            exact: Some(hi),
        };
    }
    let two = Rational::from_int(2);
    let s_hi = p.eval(&hi).sign(0.0);
    while &(&hi - &lo) > width {
        let mid = (&lo + &hi) / &two;
        let v = p.eval(&mid);
        if v.is_zero() {
            return RealRoot {
                lo: mid.clone(),
                hi: mid.clone(),
                exact: Some(mid),
            };
        }
        if v.sign(0.0) == s_hi {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    RealRoot {
        lo,
        hi,
        exact: None,
    }
}

/// Position of an isolated root relative to the rational `c`.
pub fn compare_root(p: &Poly, root: &RealRoot, c: &Rational) -> Ordering {
    if let Some(x) = &root.exact {
        return x.cmp(c);
    }
    if p.eval(c).is_zero() && &root.lo < c && c <= &root.hi {
        // c is a rational root inside the interval, so it is this root
        return Ordering::Equal;
    }
    let mut r = root.clone();
    loop {
        if &r.hi <= c {
            // the root is not c and lies in (lo, hi]
            return if &r.hi == c && p.eval(c).is_zero() {
                Ordering::Equal
            } else {
                Ordering::Less
            };
        }
        if &r.lo >= c {
            return Ordering::Greater;
        }
        let w = r.width() / Rational::from_int(2);
        r = refine_root(p, &r, &w);
        if let Some(x) = &r.exact {
            return x.cmp(c);
        }
    }
}

/// Lagrange interpolation through distinct nodes.
pub fn interpolate(points: &[(Rational, Rational)]) -> Poly {
    let mut out = Poly::zero();
    for (k, (xk, yk)) in points.iter().enumerate() {
        if yk.is_zero() {
            continue;
        }
        let mut term = Poly::constant(yk.clone());
        for (j, (xj, _)) in points.iter().enumerate() {
            if j != k {
                let lin = Poly::new(vec![-xj.clone(), Rational::one()]);
                term = &term * &lin.scale(&(Rational::one() / (xk - xj)));
            }
        }
        out = &out + &term;
    }
    out
}

/// Refines to roughly double precision and returns the midpoint.
pub fn root_to_f64(p: &Poly, root: &RealRoot) -> f64 {
    if let Some(r) = &root.exact {
        return rational_to_f64(r);
    }
    let scale = root.lo.abs().max(root.hi.abs()).max(Rational::one());
    let width = scale * Rational::new(BigInt::one(), BigInt::one() << 60usize);
    refine_root(p, root, &width).approx()
}

/// A rational root `u/v` of an integer polynomial has `v | lc`, so `root·lc`
/// is an integer; once the interval is narrower than `1/(2·lc)` there is a
/// single candidate to test.
fn recover_rational_root(p: &Poly, root: &RealRoot) -> Option<Rational> {
    let prim = p.primitive_part();
    let lc = prim.leading().abs();
    let width = Rational::one() / (&lc * Rational::from_int(4));
    let refined = refine_root(&prim, root, &width);
    if refined.exact.is_some() {
        return refined.exact;
    }
    let mid = (&refined.lo + &refined.hi) / Rational::from_int(2);
    let k = (&mid * &lc).round();
    let cand = k / &lc;
    if cand > refined.lo && cand <= refined.hi && prim.eval(&cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

/// All complex roots of a polynomial in floating point, via companion-matrix
/// eigenvalues followed by a few Newton polishing steps.
pub fn numeric_roots(p: &Poly) -> Vec<Complex64> {
    let d = p.deg();
    if d == 0 {
        return Vec::new();
    }
    let m = p.monic();
    let c = m.to_f64_coeffs();
    let companion = nalgebra::DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -c[d - 1 - j]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let eig = companion.complex_eigenvalues();
    let dp = m.derivative();
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..8 {
                let f = m.eval_complex(z);
                let df = dp.eval_complex(z);
                if df.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                let next = z - step;
                if !next.re.is_finite() || !next.im.is_finite() {
                    break;
                }
                if m.eval_complex(next).norm() > f.norm() {
                    break;
                }
                z = next;
                if step.norm() <= 1e-17 * z.norm().max(1.0) {
                    break;
                }
            }
            z
        })
        .collect()
}

/// Integer-valued helper for tests and reports.
pub fn to_i64_coeffs(p: &Poly) -> Option<Vec<i64>> {
    p.coeffs()
        .iter()
        .map(|c| {
            if c.is_integer() {
                c.numer().to_i64()
            } else {
                None
            }
        })
        .collect()
}
