use fastrev::PrimeField;
use num_bigint::BigUint;
use proptest::prelude::*;

const P63: u64 = (1 << 63) + 29;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn oracle_mod(x: BigUint, p: u64) -> u64 {
    u64::try_from(x % big(p)).unwrap()
}

fn residues() -> impl Strategy<Value = (u64, u64, u64)> {
    (0..P63, 0..P63, 0..P63)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn ops_match_bigint((a, b, _) in residues()) {
        let f = PrimeField::new(P63).unwrap();
        prop_assert_eq!(f.mul(a, b), oracle_mod(big(a) * big(b), P63));
        prop_assert_eq!(f.add(a, b), oracle_mod(big(a) + big(b), P63));
        prop_assert_eq!(f.sub(a, b), oracle_mod(big(a) + big(P63) - big(b), P63));
        prop_assert_eq!(f.neg(a), oracle_mod(big(P63) - big(a), P63));
    }

    #[test]
    fn reduce_wide_matches_bigint(x in any::<u128>()) {
        let f = PrimeField::new(P63).unwrap();
        prop_assert_eq!(f.reduce_u128(x), oracle_mod(BigUint::from(x), P63));
        let g = PrimeField::new(1_000_000_007).unwrap();
        prop_assert_eq!(g.reduce_u128(x), oracle_mod(BigUint::from(x), 1_000_000_007));
    }

    #[test]
    fn inverse_is_inverse(a in 1..P63) {
        let f = PrimeField::new(P63).unwrap();
        prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
    }

    #[test]
    fn commutative_and_associative((a, b, c) in residues()) {
        let f = PrimeField::new(P63).unwrap();
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
    }

    #[test]
    fn dot_matches_bigint(v in prop::collection::vec((0..P63, 0..P63), 0..64)) {
        let f = PrimeField::new(P63).unwrap();
        let expect = v.iter().fold(BigUint::from(0u8), |acc, &(a, b)| acc + big(a) * big(b));
        prop_assert_eq!(f.dot(v.iter().copied()), oracle_mod(expect, P63));
    }
}

#[test]
fn small_primes_match_bigint() {
    for p in [2u64, 3, 5, 7, 101, 65_537, 4_294_967_291, (1 << 61) - 1] {
        let f = PrimeField::new(p).unwrap();
        for a in [0, 1, p / 2, p - 1] {
            for b in [0, 1, p / 3, p - 1] {
                assert_eq!(f.mul(a, b), oracle_mod(big(a) * big(b), p), "p = {p}");
            }
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}

#[test]
fn minus_one_squared_is_one() {
    let f = PrimeField::new(P63).unwrap();
    assert_eq!(f.mul(P63 - 1, P63 - 1), 1);
    assert_eq!(f.neg(1), P63 - 1);
}
