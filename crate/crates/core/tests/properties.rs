use num_bigint::BigInt;
use proptest::prelude::*;

use redei::arith::{self, Place};
use redei::localdescent::SplitModel;
use redei::points::{self, MumfordDivisor};
use redei::redei::redei;

fn signed_prime() -> impl Strategy<Value = i64> {
    (prop::sample::select(vec![2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]), any::<bool>())
        .prop_map(|(p, neg)| if neg { -p } else { p })
}

fn sqf(n: i128) -> i64 {
    arith::squarefree_part(n).unwrap() as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symbol_is_symmetric(a in signed_prime(), b in signed_prime(), c in signed_prime()) {
        if let Ok(v) = redei(a, b, c) {
            for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert_eq!(redei(x, y, z).ok(), Some(v));
            }
        }
    }

    #[test]
    fn symbol_is_multiplicative(a in signed_prime(), b in signed_prime(), c1 in signed_prime(), c2 in signed_prime()) {
        let c12 = sqf(c1 as i128 * c2 as i128);
        if let (Ok(x), Ok(y), Ok(z)) = (redei(a, b, c1), redei(a, b, c2), redei(a, b, c12)) {
            prop_assert_eq!(x * y, z);
        }
    }

    #[test]
    fn hilbert_is_bilinear(a in -500i128..500, b in -500i128..500, c in -500i128..500) {
        prop_assume!(a != 0 && b != 0 && c != 0);
        let mut places = arith::relevant_places(&[a, b, c]).unwrap();
        places.push(Place::Infinite);
        for v in places {
            prop_assert_eq!(arith::hilbert(a, b * c, v), arith::hilbert(a, b, v) * arith::hilbert(a, c, v));
            prop_assert_eq!(arith::hilbert(a, b, v), arith::hilbert(b, a, v));
        }
    }

    /// δ of (e_i,0) + (e_j,0) − 2∞ equals the product of the single-point images, up to squares.
    #[test]
    fn delta_is_multiplicative(p in prop::sample::select(vec![1i64, 5, 7, 11, 13, 17, 23, 241]), i in 0usize..5, j in 0usize..5) {
        prop_assume!(i != j);
        let m = SplitModel::scaled(p);
        let (ei, ej) = (m.roots[i], m.roots[j]);
        let single = |e: i64| MumfordDivisor::parse(&[&(-e).to_string(), "1"], &["0"]);
        let both = MumfordDivisor::parse(&[&(ei * ej).to_string(), &(-(ei + ej)).to_string(), "1"], &["0"]);
        let di = points::delta_mumford(&single(ei), &m).unwrap();
        let dj = points::delta_mumford(&single(ej), &m).unwrap();
        let dij = points::delta_mumford(&both, &m).unwrap();
        for k in 0..di.len() {
            let prod: BigInt = arith::squarefree_part_big(&(&di[k] * &dj[k])).unwrap();
            prop_assert_eq!(&prod, &dij[k]);
        }
    }
}
