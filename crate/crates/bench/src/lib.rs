//! Deterministic input builders shared by the benchmarks.
//!
//! Every builder takes an explicit seed so that benchmark runs measure the
//! same inputs from one invocation to the next.

use padic_newton::{BigInt, BigRational, Polynomial};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer lattice points scattered over a wide box, suitable as direct
/// input to the lower-hull routine. Duplicate x values are intentional.
pub fn scatter_points(count: usize, seed: u64) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(0..=2_000), rng.gen_range(-1_000..=1_000)))
        .collect()
}

/// Dense polynomial with small rational coefficients and nonzero ends.
pub fn dense_polynomial(degree: usize, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<BigRational> = (0..=degree)
        .map(|i| {
            let numer: i64 = if i == 0 || i == degree {
                if rng.gen_bool(0.5) {
                    1
                } else {
                    -1
                }
            } else {
                rng.gen_range(-999..=999)
            };
            BigRational::new(BigInt::from(numer), BigInt::from(rng.gen_range(1..=99_i64)))
        })
        .collect();
    Polynomial::from_coefficients(coeffs)
}

/// Polynomial whose coefficient i is (+/-)u * p^v with u a unit mod p and a
/// fresh random valuation v, so its polygon has many candidate points.
pub fn valuation_polynomial(degree: usize, p: u64, seed: u64) -> Polynomial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs: Vec<BigRational> = (0..=degree)
        .map(|_| {
            let unit = loop {
                let u = rng.gen_range(1..=9_u64);
                if u % p != 0 {
                    break u;
                }
            };
            let sign: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            let power = BigInt::from(p).pow(rng.gen_range(0..=40_u32));
            BigRational::from_integer(BigInt::from(sign * unit as i64) * power)
        })
        .collect();
    Polynomial::from_coefficients(coeffs)
}

/// The inner polynomial x^d + p used by the composition benchmarks; it is
/// strictly p-pure of level one for every prime p.
pub fn stretch_inner(d: usize, p: u64) -> Polynomial {
    let mut coeffs = vec![int(p as i64)];
    coeffs.resize(d, int(0));
    coeffs.push(int(1));
    Polynomial::from_coefficients(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use padic_newton::{newton_polygon, ord_rat, ExtendedValuation, Prime};

    fn prime(p: u64) -> Prime {
        Prime::new(BigInt::from(p)).expect("prime")
    }

    #[test]
    fn builders_are_deterministic() {
        assert_eq!(scatter_points(100, 3), scatter_points(100, 3));
        assert_eq!(dense_polynomial(50, 3), dense_polynomial(50, 3));
        assert_eq!(
            valuation_polynomial(50, 5, 3),
            valuation_polynomial(50, 5, 3)
        );
    }

    #[test]
    fn valuation_polynomial_is_dense_with_exact_valuations() {
        let p = prime(5);
        let f = valuation_polynomial(80, 5, 1);
        assert_eq!(f.degree(), Some(80));
        for coeff in f.coefficients() {
            match ord_rat(coeff, &p) {
                ExtendedValuation::Finite(v) => assert!((0..=40).contains(&v)),
                ExtendedValuation::Infinity => panic!("zero coefficient"),
            }
        }
    }

    #[test]
    fn stretch_inner_is_strictly_pure() {
        let g = stretch_inner(7, 3);
        assert_eq!(g.degree(), Some(7));
        let np = newton_polygon(&g, &prime(3)).expect("polygon");
        assert_eq!(np.vertices().len(), 2);
    }
}
