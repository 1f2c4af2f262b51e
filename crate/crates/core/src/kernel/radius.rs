//! Certified enclosures of the largest root modulus of a polynomial.
//!
//! Two stages. Graeffe root-squaring on exact integer coefficients gives a
//! bracket from classical coefficient bounds (Fujiwara above, elementary
//! symmetric functions below), tightening as `(2n)^(1/2^k)`. Coefficients of
//! the squared polynomials grow like `2^k` bits, so squaring stops at a bit
//! budget and the bracket is then bisected with an exact root census relative
//! to a circle: the Cayley map `z = r (1 + w) / (1 - w)` turns "inside
//! `|z| = r`" into "left half-plane", where Routh-Hurwitz counting via Sturm
//! chains is exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::sturm::{cauchy_bound, SturmChain};
use super::zpoly::{count_real_roots, right_half_plane_roots, ZPoly};
use super::{KernelError, UnivariatePolynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RadiusMethod {
    /// Bracket reached tolerance from Graeffe coefficient bounds alone.
    Graeffe,
    /// Bracket refined by exact Sturm-chain root counting.
    Sturm,
    /// Empirical estimate from a sequence, not a certificate.
    GrowthRatio,
}

impl fmt::Display for RadiusMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RadiusMethod::Graeffe => "graeffe",
            RadiusMethod::Sturm => "sturm",
            RadiusMethod::GrowthRatio => "growth-ratio",
        })
    }
}

/// `lower <= rho <= upper` for the quantity being estimated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusEstimate {
    pub lower: BigRational,
    pub upper: BigRational,
    pub method: RadiusMethod,
}

impl RadiusEstimate {
    pub fn exact(value: BigRational, method: RadiusMethod) -> Self {
        RadiusEstimate {
            lower: value.clone(),
            upper: value,
            method,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lower + &self.upper) / BigRational::from_integer(2.into())
    }

    pub fn midpoint_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.midpoint()).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadiusConfig {
    /// Maximum number of root-squaring steps.
    pub graeffe_iterations: u32,
    /// Squaring stops once any coefficient exceeds this many bits.
    pub max_coefficient_bits: u64,
    /// Budget for the census bisection.
    pub max_bisections: u32,
}

impl Default for RadiusConfig {
    fn default() -> Self {
        RadiusConfig {
            graeffe_iterations: 30,
            max_coefficient_bits: 1 << 14,
            max_bisections: 400,
        }
    }
}

/// Distinct roots of a polynomial relative to the circle `|z| = r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleCensus {
    pub inside: usize,
    pub on: usize,
    pub outside: usize,
}

/// Counts the distinct complex roots of `p` strictly inside, on, and strictly
/// outside the circle of radius `r > 0`.
pub fn circle_census(
    p: &UnivariatePolynomial,
    r: &BigRational,
) -> Result<CircleCensus, KernelError> {
    if p.is_zero() {
        return Err(KernelError::ZeroPolynomial);
    }
    if !r.is_positive() {
        return Err(KernelError::NonPositiveTolerance);
    }
    Ok(census_squarefree(&p.to_zpoly().squarefree_part(), r))
}

pub(crate) fn census_squarefree(sq: &ZPoly, r: &BigRational) -> CircleCensus {
    let n = sq.degree().unwrap_or(0);
    if n == 0 {
        return CircleCensus {
            inside: 0,
            on: 0,
            outside: 0,
        };
    }
    let (u, v) = (r.numer(), r.denom());
    let plus: Vec<ZPoly> = binomial_powers(n, 1);
    let minus: Vec<ZPoly> = binomial_powers(n, -1);
    let mut g = ZPoly::zero();
    let mut upow = BigInt::one();
    let vpows: Vec<BigInt> = {
        let mut acc = vec![BigInt::one()];
        for _ in 0..n {
            let next = acc.last().unwrap() * v;
            acc.push(next);
        }
        acc
    };
    for (k, a) in sq.coeffs().iter().enumerate() {
        if !a.is_zero() {
            let c = a * &upow * &vpows[n - k];
            g = g.add(&plus[k].mul(&minus[n - k]).scale(&c));
        }
        upow *= u;
    }
    let g = g.primitive();
    let dropped = n - g.degree().unwrap_or(0);

    let sym = g.gcd(&g.reflect());
    let h = g.div_exact(&sym).expect("gcd divides");
    let rhp = right_half_plane_roots(&h);

    let d = sym.degree().unwrap_or(0);
    let axis_poly = ZPoly::new(
        sym.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if (d + k) % 2 == 1 {
                    debug_assert!(c.is_zero(), "symmetric factor must have pure parity");
                    BigInt::zero()
                } else if ((d.max(k) - d.min(k)) / 2) % 2 == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect(),
    );
    let on_axis = count_real_roots(&axis_poly);
    let paired = d - on_axis;
    debug_assert!(paired.is_multiple_of(2));
    let outside = rhp + paired / 2;
    let on = on_axis + dropped;
    CircleCensus {
        inside: n - on - outside,
        on,
        outside,
    }
}

/// `(1 + s w)^k` for `k = 0..=n`.
fn binomial_powers(n: usize, s: i64) -> Vec<ZPoly> {
    let base = ZPoly::from_i64(&[1, s]);
    let mut out = vec![ZPoly::from_i64(&[1])];
    for _ in 0..n {
        let next = out.last().unwrap().mul(&base);
        out.push(next);
    }
    out
}

/// Largest integer `m` with `m / 2^p <= x^(1/j)`.
fn dyadic_root_floor(x: &BigRational, j: u32, p: u32) -> BigInt {
    let scaled = (x.numer() << (j as usize * p as usize)) / x.denom();
    scaled.nth_root(j)
}

/// Smallest integer `m` with `m / 2^p >= x^(1/j)`.
fn dyadic_root_ceil(x: &BigRational, j: u32, p: u32) -> BigInt {
    let num: BigInt = x.numer() << (j as usize * p as usize);
    let (q, rem) = num_integer::Integer::div_rem(&num, x.denom());
    let target = if rem.is_zero() { q } else { q + 1 };
    let m = target.nth_root(j);
    if num_traits::Pow::pow(&m, j) < target {
        m + 1
    } else {
        m
    }
}

fn dyadic_sqrt_floor(m: &BigInt, p: u32) -> BigInt {
    (m << p as usize).sqrt()
}

fn dyadic_sqrt_ceil(m: &BigInt, p: u32) -> BigInt {
    let t: BigInt = m << p as usize;
    let s = t.sqrt();
    if &s * &s < t {
        s + 1
    } else {
        s
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// One root-squaring step: the result has the squares of the roots of `q`.
fn graeffe_step(q: &ZPoly) -> ZPoly {
    let prod = q.mul(&q.reflect());
    let n = q.degree().unwrap_or(0);
    let sign = if n % 2 == 1 { -1 } else { 1 };
    ZPoly::new(
        prod.coeffs()
            .iter()
            .step_by(2)
            .map(|c| c * BigInt::from(sign))
            .collect(),
    )
}

/// Dyadic bracket (numerators over `2^p`) for the largest root modulus of `q`,
/// `q(0) != 0`, before undoing the squarings.
fn coefficient_bracket(q: &ZPoly, p: u32) -> (BigInt, BigInt) {
    let n = q.degree().expect("nonzero polynomial");
    let lead = q.lc().abs();
    let mut lower = BigInt::zero();
    let mut upper = BigInt::zero();
    for j in 1..=n {
        let a = q.coeffs()[n - j].abs();
        if a.is_zero() {
            continue;
        }
        let lo_ratio = BigRational::new(a.clone(), &lead * binomial(n, j));
        let lo = dyadic_root_floor(&lo_ratio, j as u32, p);
        if lo > lower {
            lower = lo;
        }
        let up_ratio = if j == n {
            BigRational::new(a, &lead * 2)
        } else {
            BigRational::new(a, lead.clone())
        };
        let up = dyadic_root_ceil(&up_ratio, j as u32, p);
        if up > upper {
            upper = up;
        }
    }
    (lower, upper * 2)
}

pub(crate) fn simplest_between(a: &BigRational, b: &BigRational) -> BigRational {
    debug_assert!(a <= b && !a.is_negative());
    let fl = a.floor();
    if &fl == a {
        return a.clone();
    }
    if &(&fl + BigRational::one()) <= b {
        return fl + BigRational::one();
    }
    let inner = simplest_between(&(b - &fl).recip(), &(a - &fl).recip());
    fl + inner.recip()
}

/// Certified interval of width `<= tol` containing `max |z|` over roots of `p`.
pub fn dominant_modulus(
    p: &UnivariatePolynomial,
    tol: &BigRational,
) -> Result<RadiusEstimate, KernelError> {
    dominant_modulus_with(p, tol, &RadiusConfig::default())
}

pub fn dominant_modulus_with(
    p: &UnivariatePolynomial,
    tol: &BigRational,
    config: &RadiusConfig,
) -> Result<RadiusEstimate, KernelError> {
    let degree = p.degree().ok_or(KernelError::ZeroPolynomial)?;
    if degree == 0 {
        return Err(KernelError::ConstantPolynomial);
    }
    if !tol.is_positive() {
        return Err(KernelError::NonPositiveTolerance);
    }
    let z = p.to_zpoly().squarefree_part();
    let z = z.shift_down(z.zero_root_multiplicity());
    if z.degree() == Some(0) {
        return Ok(RadiusEstimate::exact(
            BigRational::zero(),
            RadiusMethod::Graeffe,
        ));
    }
    if z.degree() == Some(1) {
        let root = BigRational::new(-z.coeffs()[0].clone(), z.coeffs()[1].clone());
        return Ok(RadiusEstimate::exact(root.abs(), RadiusMethod::Graeffe));
    }

    // Fractional precision for the dyadic bounds: comfortably below tol.
    let tol_bits = {
        let inv = tol.recip().ceil().to_integer();
        inv.bits() as u32
    };
    let prec = tol_bits + 24;
    let scale = BigRational::from_integer(BigInt::one() << prec as usize);

    let mut lo = BigRational::zero();
    let mut hi = cauchy_bound(&UnivariatePolynomial::from_bigints(z.coeffs()))?;
    let mut q = z.clone();
    for k in 0..=config.graeffe_iterations {
        let (mut l, mut u) = coefficient_bracket(&q, prec);
        for _ in 0..k {
            l = dyadic_sqrt_floor(&l, prec);
            u = dyadic_sqrt_ceil(&u, prec);
        }
        let l = BigRational::from_integer(l) / &scale;
        let u = BigRational::from_integer(u) / &scale;
        if l > lo {
            lo = l;
        }
        if u < hi {
            hi = u;
        }
        if &(&hi - &lo) <= tol
            || k == config.graeffe_iterations
            || q.max_bits() > config.max_coefficient_bits
        {
            break;
        }
        q = graeffe_step(&q);
    }
    if lo > hi {
        return Err(KernelError::Inconsistent("graeffe bracket is empty"));
    }

    let estimate = if &(&hi - &lo) <= tol {
        snap(&z, &lo, &hi)
            .map(|x| RadiusEstimate::exact(x, RadiusMethod::Graeffe))
            .unwrap_or(RadiusEstimate {
                lower: lo,
                upper: hi,
                method: RadiusMethod::Graeffe,
            })
    } else {
        bisect(&z, lo, hi, tol, config)?
    };
    cross_check_real_roots(&z, &estimate)?;
    Ok(estimate)
}

/// The simplest rational in `[lo, hi]`, if it is exactly the dominant modulus.
fn snap(z: &ZPoly, lo: &BigRational, hi: &BigRational) -> Option<BigRational> {
    let lo_pos = if lo.is_positive() {
        lo.clone()
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << 64usize).min(hi.clone())
    };
    if !lo_pos.is_positive() {
        return None;
    }
    let cand = simplest_between(&lo_pos, hi);
    let c = census_squarefree(z, &cand);
    (c.outside == 0 && c.on > 0).then_some(cand)
}

fn bisect(
    z: &ZPoly,
    mut lo: BigRational,
    mut hi: BigRational,
    tol: &BigRational,
    config: &RadiusConfig,
) -> Result<RadiusEstimate, KernelError> {
    if let Some(x) = snap(z, &lo, &hi) {
        return Ok(RadiusEstimate::exact(x, RadiusMethod::Sturm));
    }
    let two = BigRational::from_integer(2.into());
    let mut steps = 0;
    while &(&hi - &lo) > tol {
        if steps == config.max_bisections {
            return Err(KernelError::ToleranceNotReached {
                lower: lo,
                upper: hi,
            });
        }
        steps += 1;
        let mid = (&lo + &hi) / &two;
        let c = census_squarefree(z, &mid);
        if c.outside == 0 {
            if c.on > 0 {
                return Ok(RadiusEstimate::exact(mid, RadiusMethod::Sturm));
            }
            hi = mid;
        } else {
            lo = mid;
        }
        if steps % 8 == 0 {
            if let Some(x) = snap(z, &lo, &hi) {
                return Ok(RadiusEstimate::exact(x, RadiusMethod::Sturm));
            }
        }
    }
    if let Some(x) = snap(z, &lo, &hi) {
        return Ok(RadiusEstimate::exact(x, RadiusMethod::Sturm));
    }
    Ok(RadiusEstimate {
        lower: lo,
        upper: hi,
        method: RadiusMethod::Sturm,
    })
}

/// The real roots must all sit inside the certified bracket.
fn cross_check_real_roots(z: &ZPoly, est: &RadiusEstimate) -> Result<(), KernelError> {
    let chain = SturmChain::new(z);
    let far = cauchy_bound(&UnivariatePolynomial::from_bigints(z.coeffs()))? + &est.upper;
    let hi = &est.upper;
    let beyond = chain.count_open(hi, &far) + chain.count_open(&-&far, &-hi);
    if beyond > 0 {
        return Err(KernelError::Inconsistent(
            "real root found beyond the certified modulus bound",
        ));
    }
    Ok(())
}
