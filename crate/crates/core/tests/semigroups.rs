use std::collections::BTreeSet;

use proptest::prelude::*;
use sepsemi_core::semigroup::{
    closure_up_to_bound, positive_vectors, table1_description, theorem2_description, RealizationLedger,
    SemigroupDescription, TABLE1_ROWS,
};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn descriptions() -> Vec<SemigroupDescription> {
    let mut d: Vec<_> = TABLE1_ROWS.iter().map(|&(k, r, l)| table1_description(k, r, l).unwrap()).collect();
    d.extend((1..=8).map(|g| theorem2_description(g).unwrap()));
    d
}

proptest! {
    #[test]
    fn positive_vectors_are_counted_by_stars_and_bars(r in 1usize..5, bound in 0u32..12) {
        let v = positive_vectors(r, bound);
        prop_assert_eq!(v.len() as u64, if bound as usize >= r { binomial(bound as u64, r as u64) } else { 0 });
        prop_assert!(v.iter().all(|x| x.len() == r && x.iter().all(|&e| e >= 1) && x.iter().sum::<u32>() <= bound));
    }

    #[test]
    fn descriptions_are_closed_under_sums(i in 0usize..17, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let s = &descriptions()[i];
        let members: Vec<Vec<u32>> = s.enumerate(10).into_iter().collect();
        prop_assume!(!members.is_empty());
        let (u, v) = (a.get(&members), b.get(&members));
        prop_assert!(s.contains(&add(u, v)).unwrap());
    }

    #[test]
    fn closures_contain_the_ledger_and_its_sums(
        entries in prop::collection::vec((prop::collection::vec(1u32..4, 3), any::<bool>()), 1..4),
        bound in 3u32..10,
    ) {
        let mut ledger = RealizationLedger::default();
        for (v, ns) in &entries {
            ledger.push(v.clone(), "", *ns);
        }
        let c = closure_up_to_bound(&ledger, bound).unwrap();
        let sum = |v: &[u32]| v.iter().sum::<u32>();
        for (v, ns) in &entries {
            if sum(v) <= bound {
                prop_assert!(c.contains(v));
                if *ns {
                    let up: Vec<u32> = v.iter().map(|x| x + 1).collect();
                    prop_assert_eq!(c.contains(&up), sum(&up) <= bound);
                }
            }
        }
        for u in &c {
            prop_assert!(sum(u) <= bound);
            for v in &c {
                if sum(u) + sum(v) <= bound {
                    prop_assert!(c.contains(&add(u, v)));
                }
            }
        }
        // raising the bound only adds longer vectors
        let wider: BTreeSet<Vec<u32>> =
            closure_up_to_bound(&ledger, bound + 2).unwrap().into_iter().filter(|v| sum(v) <= bound).collect();
        prop_assert_eq!(wider, c);
    }
}
