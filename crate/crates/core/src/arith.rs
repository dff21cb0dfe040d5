//! Elementary integer arithmetic shared by every layer: gcds, square tests,
//! factorisation and a linear sieve for μ, φ and smallest prime factors.

use num_integer::Integer;

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn gcd128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

/// Floor of the square root of `n`.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt(n as u128);
    r * r == n as u128
}

/// Prime factorisation of `|n|` by trial division, primes ascending.
pub fn factorize(n: i64) -> Vec<(i64, u32)> {
    let mut n = n.unsigned_abs();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p as i64, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n as i64, 1));
    }
    out
}

pub fn is_squarefree(n: i64) -> bool {
    n != 0 && factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Möbius function by factorisation.
pub fn mobius(n: i64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Positive divisors of `|n|`, unsorted.
pub fn divisors(n: i64) -> Vec<i64> {
    let mut ds = vec![1i64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds
}

/// Linear sieve up to `limit` inclusive.
#[derive(Debug, Clone)]
pub struct Sieve {
    pub limit: usize,
    pub primes: Vec<u32>,
    pub spf: Vec<u32>,
    pub mu: Vec<i8>,
    pub phi: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        let n = limit.max(1);
        let mut spf = vec![0u32; n + 1];
        let mut mu = vec![0i8; n + 1];
        let mut phi = vec![0u32; n + 1];
        let mut primes = Vec::new();
        mu[1] = 1;
        phi[1] = 1;
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mu[i] = -1;
                phi[i] = (i - 1) as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let p = p as usize;
                let ip = i * p;
                if p > spf[i] as usize || ip > n {
                    break;
                }
                spf[ip] = p as u32;
                if i % p == 0 {
                    mu[ip] = 0;
                    phi[ip] = phi[i] * p as u32;
                } else {
                    mu[ip] = -mu[i];
                    phi[ip] = phi[i] * (p as u32 - 1);
                }
            }
        }
        Sieve { limit: n, primes, spf, mu, phi }
    }

    pub fn factor(&self, mut n: usize) -> Vec<(usize, u32)> {
        let mut out: Vec<(usize, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }
}
