//! Factorization of polynomials over `Q`.
//!
//! Squarefree decomposition (Yun), then each squarefree part is factored over
//! `Z` by factoring modulo a small prime, Hensel lifting the modular factors and
//! recombining lifted factors into true divisors.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::{poly_gcd, Polynomial};
use super::rational::Rational;
use crate::error::{invalid, Result};

/// `unit · Π factor^exponent` with monic irreducible, pairwise distinct factors
/// in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Polynomial, u32)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> Polynomial {
        self.factors
            .iter()
            .fold(Polynomial::constant(self.unit.clone()), |acc, (f, e)| {
                acc * f.pow(*e)
            })
    }
}

/// Factors a nonzero polynomial into a rational unit times monic irreducibles.
pub fn poly_factor(f: &Polynomial) -> Result<Factorization> {
    if f.is_zero() {
        return invalid("cannot factor the zero polynomial");
    }
    let unit = f.leading();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for irr in factor_squarefree(&part) {
            factors.push((irr, mult));
        }
    }
    factors.sort();
    Ok(Factorization { unit, factors })
}

/// Yun's algorithm on a monic polynomial: returns `(a_i, i)` with `f = Π a_i^i`,
/// each `a_i` monic squarefree of positive degree.
pub fn squarefree_decomposition(f: &Polynomial) -> Vec<(Polynomial, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let a0 = poly_gcd(f, &df).expect("f nonzero");
    let mut b = f.exact_div(&a0).expect("gcd divides");
    let mut c = df.exact_div(&a0).expect("gcd divides");
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        let a = poly_gcd(&b, &d).expect("b nonconstant");
        b = b.exact_div(&a).expect("gcd divides");
        c = d.exact_div(&a).expect("gcd divides");
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

/// Monic irreducible factors of a monic squarefree polynomial.
fn factor_squarefree(f: &Polynomial) -> Vec<Polynomial> {
    match f.degree() {
        None | Some(0) => Vec::new(),
        Some(1) => vec![f.clone()],
        Some(_) => {
            let (_, prim) = f.primitive_integer();
            zassenhaus(&prim)
                .into_iter()
                .map(|g| Polynomial::from_integers(&g).monic())
                .collect()
        }
    }
}

// ---------------------------------------------------------------------------
// Arithmetic in F_p[t], p < 2^31, coefficients low to high, no trailing zeros.

type ModPoly = Vec<u64>;

fn trim(mut v: ModPoly) -> ModPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn mp_from_int(f: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    trim(
        f.iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced mod p"))
            .collect(),
    )
}

fn mp_sub(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mp_mul(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn mp_divrem(a: &[u64], b: &[u64], p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), trim(rem));
    }
    let lc_inv = inv_mod(b[db], p);
    let mut quot = vec![0u64; rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = rem[k + db] * lc_inv % p;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + p - c * bj % p) % p;
            }
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

fn mp_rem(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    mp_divrem(a, b, p).1
}

fn mp_monic(a: &[u64], p: u64) -> ModPoly {
    match a.last() {
        None => Vec::new(),
        Some(&lc) => {
            let inv = inv_mod(lc, p);
            a.iter().map(|c| c * inv % p).collect()
        }
    }
}

fn mp_gcd(a: &[u64], b: &[u64], p: u64) -> ModPoly {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = mp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    mp_monic(&a, p)
}

/// Returns `(s, t)` with `s·a + t·b = 1` for coprime `a`, `b`.
fn mp_bezout(a: &[u64], b: &[u64], p: u64) -> (ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = mp_divrem(&r0, &r1, p);
        let s2 = mp_sub(&s0, &mp_mul(&q, &s1, p), p);
        let t2 = mp_sub(&t0, &mp_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    // r0 is a nonzero constant
    let inv = inv_mod(r0[0], p);
    let scale = |v: ModPoly| trim(v.into_iter().map(|c| c * inv % p).collect());
    (scale(s0), scale(t0))
}

fn mp_powmod(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> ModPoly {
    let mut acc = vec![1u64];
    let base = mp_rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = mp_rem(&mp_mul(&acc, &acc, p), m, p);
        if e.bit(i) {
            acc = mp_rem(&mp_mul(&acc, &base, p), m, p);
        }
    }
    acc
}

fn mp_derivative(a: &[u64], p: u64) -> ModPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| (i as u64 % p) * c % p)
            .collect(),
    )
}

fn deg(a: &[u64]) -> usize {
    a.len().saturating_sub(1)
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &[u64], p: u64) -> Vec<(ModPoly, usize)> {
    let mut out = Vec::new();
    let mut g = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut i = 1;
    while deg(&g) >= 2 * i {
        h = mp_powmod(&h, &pe, &g, p);
        let d = mp_gcd(&g, &mp_sub(&h, &x, p), p);
        if deg(&d) > 0 {
            g = mp_divrem(&g, &d, p).0;
            h = mp_rem(&h, &g, p);
            out.push((d, i));
        }
        i += 1;
    }
    if deg(&g) > 0 {
        let d = deg(&g);
        out.push((g, d));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of irreducibles of degree `d`.
fn equal_degree(f: &[u64], d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    if deg(f) == d {
        return vec![f.to_vec()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: ModPoly = trim((0..deg(f)).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a) == 0 {
            continue;
        }
        let b = mp_sub(&mp_powmod(&a, &e, f, p), &[1], p);
        let g = mp_gcd(f, &b, p);
        if deg(&g) > 0 && deg(&g) < deg(f) {
            let h = mp_divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&mp_monic(&h, p), d, p, rng));
            return out;
        }
    }
}

fn factor_mod_p(f: &[u64], p: u64) -> Vec<ModPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ p);
    let f = mp_monic(f, p);
    distinct_degree(&f, p)
        .into_iter()
        .flat_map(|(g, d)| equal_degree(&g, d, p, &mut rng))
        .collect()
}

fn is_prime_u64(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

// ---------------------------------------------------------------------------
// Lifting and recombination over Z.

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn reduce(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    a.iter().map(|c| c.mod_floor(m)).collect()
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn mp_to_int(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f ≡ g·h (mod p)` with `g` monic to `f ≡ g·h (mod p^k)` where `p^k = modulus`.
fn hensel_pair(
    f: &[BigInt],
    g0: &[u64],
    h0: &[u64],
    p: u64,
    modulus: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, t) = mp_bezout(g0, h0, p);
    let pb = BigInt::from(p);
    let mut g = mp_to_int(g0);
    let mut h = mp_to_int(h0);
    let mut pk = pb.clone();
    while &pk < modulus {
        let next = &pk * &pb;
        let gh = int_poly_mul(&g, &h);
        let n = f.len().max(gh.len());
        let err: Vec<BigInt> = (0..n)
            .map(|i| {
                let a = f.get(i).cloned().unwrap_or_default();
                let b = gh.get(i).cloned().unwrap_or_default();
                (a - b).mod_floor(&next) / &pk
            })
            .collect();
        let e = mp_from_int(&err, p);
        if !e.is_empty() {
            let gp = mp_from_int(&g, p);
            let hp = mp_from_int(&h, p);
            let dg = mp_rem(&mp_mul(&t, &e, p), &gp, p);
            let dh = mp_divrem(&mp_sub(&e, &mp_mul(&dg, &hp, p), p), &gp, p).0;
            for (i, c) in dg.iter().enumerate() {
                g[i] += &pk * BigInt::from(*c);
            }
            for (i, c) in dh.iter().enumerate() {
                h[i] += &pk * BigInt::from(*c);
            }
        }
        g = reduce(&g, &next);
        h = reduce(&h, &next);
        pk = next;
    }
    (g, h)
}

/// Lifts the monic modular factors of `f` to `modulus`.
fn hensel_multi(f: &[BigInt], factors: &[ModPoly], p: u64, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    if factors.len() == 1 {
        // f ≡ lc·u, so u ≡ f / lc
        let lc = f.last().expect("nonzero").clone();
        let inv = lc.modinv(modulus).expect("lc prime to p");
        return vec![reduce(&f.iter().map(|c| c * &inv).collect::<Vec<_>>(), modulus)];
    }
    let lc_p = mp_from_int(&[f.last().expect("nonzero").clone()], p);
    let rest = factors[1..]
        .iter()
        .fold(lc_p, |acc, u| mp_mul(&acc, u, p));
    let (g, h) = hensel_pair(f, &factors[0], &rest, p, modulus);
    let mut out = vec![g];
    // h has leading coefficient lc(f) and is the integer target for the remaining factors
    let mut h_sym = symmetric(&h, modulus);
    let lc = f.last().expect("nonzero").clone();
    let hl = h_sym.len() - 1;
    h_sym[hl] = lc;
    out.extend(hensel_multi(&h_sym, &factors[1..], p, modulus));
    out
}

fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut c = content(a);
    if a.last().is_some_and(Signed::is_negative) {
        c = -c;
    }
    a.iter().map(|x| x / &c).collect()
}

fn int_exact_div(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    let ff = Polynomial::from_integers(f);
    let gg = Polynomial::from_integers(g);
    let q = ff.exact_div(&gg)?;
    let (c, prim) = q.primitive_integer();
    // g primitive and f primitive imply an integral primitive quotient up to sign
    (c.is_integer() && c.abs().is_one()).then(|| {
        if c.is_negative() {
            prim.iter().map(|x| -x).collect()
        } else {
            prim
        }
    })
}

/// Factors a primitive squarefree integer polynomial of degree ≥ 2 with
/// positive leading coefficient into primitive irreducibles.
fn zassenhaus(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    let lc = f[n].clone();

    // Pick, among a few admissible primes, the one with the fewest modular factors.
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    for p in (3u64..).filter(|&p| is_prime_u64(p)) {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = mp_from_int(f, p);
        if deg(&mp_gcd(&fp, &mp_derivative(&fp, p), p)) > 0 {
            continue;
        }
        let facs = factor_mod_p(&fp, p);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, modular) = best.expect("an admissible prime exists");
    log::debug!("factoring degree {n} polynomial via p = {p}, {} modular factors", modular.len());

    // Coefficients of any factor are bounded by 2^n · ||f||_1; recombination multiplies by lc.
    let norm1: BigInt = f.iter().map(|c| c.abs()).sum();
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm1;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
    }

    let mut lifted = hensel_multi(f, &modular, p, &modulus);
    let mut target = f.to_vec();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut hit = None;
        for combo in (0..lifted.len()).combinations(size) {
            let lc_t = target.last().expect("nonzero").clone();
            let prod = combo
                .iter()
                .fold(vec![lc_t], |acc, &i| reduce(&int_poly_mul(&acc, &lifted[i]), &modulus));
            let cand = primitive(&symmetric(&prod, &modulus));
            if let Some(q) = int_exact_div(&target, &cand) {
                hit = Some((combo, cand, q));
                break;
            }
        }
        match hit {
            Some((combo, cand, q)) => {
                found.push(cand);
                target = q;
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, u)| u)
                    .collect();
            }
            None => size += 1,
        }
    }
    if target.len() > 1 {
        found.push(target);
    }
    found
}
