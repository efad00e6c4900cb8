//! Exact characteristic polynomials by Hessenberg reduction modulo many
//! 62-bit primes followed by Chinese remaindering.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::linalg::{RationalMatrix, RationalPolynomial};

/// Montgomery arithmetic modulo an odd `p < 2^62`.
#[derive(Debug, Clone, Copy)]
struct Mont {
    p: u64,
    /// `-p^{-1} mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl Mont {
    fn new(p: u64) -> Self {
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r2 = ((u128::MAX % p as u128 + 1) % p as u128) as u64;
        Mont { p, pinv: inv.wrapping_neg(), r2 }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn enter(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    fn leave(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = self.enter(1);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes below `2^62`, descending.
fn primes(count: usize) -> Vec<u64> {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let mut cache = CACHE.get_or_init(|| Mutex::new(Vec::new())).lock().unwrap();
    let mut c = cache.last().copied().unwrap_or(1u64 << 62) - 1;
    while cache.len() < count {
        if c % 2 == 1 && is_prime(c) {
            cache.push(c);
        }
        c -= 1;
    }
    cache[..count].to_vec()
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

/// Characteristic polynomial of an integer matrix modulo `p`, ascending.
fn char_poly_mod(b: &[Vec<BigInt>], p: u64) -> Vec<u64> {
    let n = b.len();
    let m = Mont::new(p);
    let mut h: Vec<u64> = b.iter().flat_map(|row| row.iter().map(|x| m.enter(reduce(x, p)))).collect();
    let at = |i: usize, j: usize| i * n + j;

    // similarity reduction to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[at(i, j)] != 0) else {
            continue;
        };
        if piv != j + 1 {
            for c in 0..n {
                h.swap(at(piv, c), at(j + 1, c));
            }
            for r in 0..n {
                h.swap(at(r, piv), at(r, j + 1));
            }
        }
        let inv = m.inv(h[at(j + 1, j)]);
        for i in j + 2..n {
            let hij = h[at(i, j)];
            if hij == 0 {
                continue;
            }
            let u = m.mul(hij, inv);
            // row_i -= u * row_{j+1}
            let (top, bottom) = h.split_at_mut(at(i, 0));
            let src = &top[at(j + 1, 0)..at(j + 2, 0)];
            let dst = &mut bottom[..n];
            for c in j..n {
                dst[c] = m.sub(dst[c], m.mul(u, src[c]));
            }
            // col_{j+1} += u * col_i
            for r in 0..n {
                let v = h[at(r, i)];
                if v != 0 {
                    h[at(r, j + 1)] = m.add(h[at(r, j + 1)], m.mul(u, v));
                }
            }
        }
    }

    // p_k(t) = (t - h_kk) p_{k-1} - Σ_{i<k} h_ik (Π_{l=i+1..k} h_{l,l-1}) p_{i-1}
    let one = m.enter(1);
    let mut polys: Vec<Vec<u64>> = vec![vec![one]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = m.add(next[d + 1], c);
            next[d] = m.sub(next[d], m.mul(h[at(k, k)], c));
        }
        let mut prod = one;
        for i in (0..k).rev() {
            prod = m.mul(prod, h[at(i + 1, i)]);
            if prod == 0 {
                break;
            }
            let coef = m.mul(h[at(i, k)], prod);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = m.sub(next[d], m.mul(coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap().into_iter().map(|c| m.leave(c)).collect()
}

/// Incremental Chinese remaindering into the symmetric range.
struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Crt {
    fn new(len: usize) -> Self {
        Crt { modulus: BigInt::one(), values: vec![BigInt::zero(); len] }
    }

    fn push(&mut self, p: u64, residues: &[u64]) {
        let mm = reduce(&self.modulus, p);
        let minv = powmod(mm, p - 2, p);
        for (x, &r) in self.values.iter_mut().zip(residues) {
            let xr = reduce(x, p);
            let diff = (r + p - xr) % p;
            let k = mulmod(diff, minv, p);
            *x += &self.modulus * BigInt::from(k);
        }
        self.modulus *= BigInt::from(p);
    }

    fn finish(self) -> Vec<BigInt> {
        let half = &self.modulus >> 1usize;
        self.values
            .into_iter()
            .map(|x| if x > half { x - &self.modulus } else { x })
            .collect()
    }
}

/// `det(tI - B)` for an integer matrix, ascending coefficients.
///
/// Coefficient `k` is a signed sum of `C(n, k)` principal minors, each bounded
/// by `R^{n-k}` for the largest absolute row sum `R`, so every coefficient is
/// below `(1 + R)^n`; enough primes are used to cover twice that.
pub fn integer_char_poly(b: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = b.len();
    if n == 0 {
        return vec![BigInt::one()];
    }
    let r: BigInt = b
        .iter()
        .map(|row| row.iter().map(|x| x.abs()).sum::<BigInt>())
        .max()
        .unwrap();
    let bound_bits = (r + 1u32).bits() * n as u64 + 2;
    let count = (bound_bits / 61 + 1) as usize;
    let mut crt = Crt::new(n + 1);
    for p in primes(count) {
        crt.push(p, &char_poly_mod(b, p));
    }
    crt.finish()
}

/// Clears denominators: returns `(D, D·A)` with `D` the least common
/// denominator of the entries.
pub fn scale_to_integers(a: &RationalMatrix) -> (BigInt, Vec<Vec<BigInt>>) {
    let d = a
        .rows()
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let rows = a
        .rows()
        .iter()
        .map(|row| row.iter().map(|x| x.numer() * (&d / x.denom())).collect())
        .collect();
    (d, rows)
}

/// `det(tI - A)`, exact.
pub fn char_poly(a: &RationalMatrix) -> Result<RationalPolynomial> {
    let n = a.dim();
    let (d, b) = scale_to_integers(a);
    let cb = integer_char_poly(&b);
    // c_k(A) = c_k(B) / D^{n-k}
    let mut out = vec![BigRational::zero(); n + 1];
    let mut dpow = BigInt::one();
    for k in (0..=n).rev() {
        out[k] = BigRational::new(cb[k].clone(), dpow.clone());
        dpow *= &d;
    }
    Ok(RationalPolynomial::new(out))
}
