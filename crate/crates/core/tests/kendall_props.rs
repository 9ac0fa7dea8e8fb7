mod common;

use std::collections::BTreeMap;

use common::{random_ranks, tau_oracle};
use cooccur_audit::stats::tau_from_ranks;
use cooccur_audit::{kendall_tau, RankRow};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn row(ranks: &[u32]) -> RankRow {
    RankRow::from_ranks(
        ranks
            .iter()
            .enumerate()
            .map(|(i, r)| (format!("s{i:02}"), *r)),
    )
}

fn untied() -> impl Strategy<Value = Vec<u32>> {
    (2usize..12).prop_flat_map(|n| Just((1..=n as u32).collect::<Vec<_>>()).prop_shuffle())
}

fn tied_pair() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (2usize..13, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (random_ranks(&mut rng, n), random_ranks(&mut rng, n))
    })
}

proptest! {
    #[test]
    fn identity_reverse_and_symmetry(x in untied(), (a, b) in tied_pair()) {
        let rx = row(&x);
        let rev: Vec<u32> = x.iter().map(|r| x.len() as u32 + 1 - r).collect();
        prop_assert_eq!(kendall_tau(&rx, &rx).unwrap(), 1.0);
        prop_assert_eq!(kendall_tau(&rx, &row(&rev)).unwrap(), -1.0);
        let (ra, rb) = (row(&a), row(&b));
        let t = kendall_tau(&ra, &rb).unwrap();
        prop_assert_eq!(t, kendall_tau(&rb, &ra).unwrap());
        prop_assert!((-1.0..=1.0).contains(&t));
    }

    #[test]
    fn matches_ordered_pair_oracle((a, b) in tied_pair()) {
        let t = kendall_tau(&row(&a), &row(&b)).unwrap();
        prop_assert!((t - tau_oracle(&a, &b)).abs() <= 1e-12);
        prop_assert_eq!(t, tau_from_ranks(&a, &b));
    }

    #[test]
    fn all_tied_gives_zero(x in untied()) {
        let flat = vec![1; x.len()];
        prop_assert_eq!(kendall_tau(&row(&x), &row(&flat)).unwrap(), 0.0);
    }

    #[test]
    fn invariant_under_relabeling((a, b) in tied_pair(), seed in any::<u64>()) {
        let n = a.len();
        let mut names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        rand::seq::SliceRandom::shuffle(names.as_mut_slice(), &mut ChaCha8Rng::seed_from_u64(seed));
        let relabel = |r: &[u32]| RankRow::from_ranks(names.iter().cloned().zip(r.iter().copied()));
        prop_assert_eq!(
            kendall_tau(&relabel(&a), &relabel(&b)).unwrap(),
            kendall_tau(&row(&a), &row(&b)).unwrap()
        );
    }
}

#[test]
fn ranks_from_scores_are_min_ranks() {
    let r = RankRow::from_scores([("a", 3.0), ("b", 3.0), ("c", 5.0), ("d", 1.0)]);
    let got: BTreeMap<&str, u32> = r.ranks().iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assert_eq!(
        got,
        BTreeMap::from([("a", 2), ("b", 2), ("c", 1), ("d", 4)])
    );
}
