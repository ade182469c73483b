use std::collections::BTreeMap;

use chitchat_core::annotation::{fleiss_kappa, fleiss_kappa_counts, KappaError, KappaReport, Label};
use chitchat_core::Rational;
use proptest::prelude::*;

fn table() -> impl Strategy<Value = Vec<Vec<usize>>> {
    (2usize..6, 2usize..4).prop_flat_map(|(n, cats)| {
        prop::collection::vec(prop::collection::vec(0..cats, n), 1..12).prop_map(move |items| {
            items
                .into_iter()
                .map(|ratings| {
                    let mut row = vec![0; cats];
                    for r in ratings {
                        row[r] += 1;
                    }
                    row
                })
                .collect()
        })
    })
}

#[test]
fn perfect_agreement() {
    for rows in [vec![vec![2, 0], vec![0, 2]], vec![vec![0, 5], vec![5, 0], vec![5, 0]], vec![vec![3, 0]]] {
        let (k, p, _): (Rational, Rational, Rational) = fleiss_kappa_counts(&rows).unwrap();
        assert_eq!(k, Rational::from_integer(1));
        assert_eq!(p, Rational::from_integer(1));
    }
}

#[test]
fn two_items_two_raters() {
    use Label::*;
    let ratings = BTreeMap::from([("x".to_string(), vec![Good, Good]), ("y".to_string(), vec![Good, Bad])]);
    let exact: KappaReport<Rational> = fleiss_kappa(&ratings, None).unwrap();
    assert_eq!(exact.kappa, Rational::new(-1, 3));
    assert_eq!(exact.observed_agreement, Rational::new(1, 2));
    assert_eq!(exact.expected_agreement, Rational::new(5, 8));
    let float: KappaReport<f64> = fleiss_kappa(&ratings, None).unwrap();
    assert!((float.kappa + 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn degenerate_inputs() {
    assert_eq!(fleiss_kappa_counts::<f64>(&[]).unwrap_err(), KappaError::NoItems { raters: 0, excluded: 0 });
    assert_eq!(fleiss_kappa_counts::<f64>(&[vec![1, 0]]).unwrap_err(), KappaError::TooFewRaters(1));
    let ratings = BTreeMap::from([("x".to_string(), vec![Label::Good, Label::Bad, Label::Good])]);
    let r: KappaReport<Rational> = fleiss_kappa(&ratings, Some(2)).unwrap();
    assert_eq!(r.raters_per_item, 2);
    assert_eq!(r.items, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn permutation_invariant(rows in table(), seed in any::<u64>()) {
        let base: Result<(Rational, Rational, Rational), _> = fleiss_kappa_counts(&rows);

        // reorder items
        let mut shuffled = rows.clone();
        let len = shuffled.len();
        for i in (1..len).rev() {
            let j = (seed.rotate_left(i as u32) as usize) % (i + 1);
            shuffled.swap(i, j);
        }
        prop_assert_eq!(&fleiss_kappa_counts(&shuffled), &base);

        // relabel categories
        let relabeled: Vec<Vec<usize>> = rows.iter().map(|r| r.iter().rev().copied().collect()).collect();
        prop_assert_eq!(&fleiss_kappa_counts(&relabeled), &base);

        if let Ok((k, p, pe)) = base {
            prop_assert!(k <= Rational::from_integer(1));
            let f: (f64, f64, f64) = fleiss_kappa_counts(&rows).unwrap();
            let to_f = |q: Rational| *q.numer() as f64 / *q.denom() as f64;
            prop_assert!((f.0 - to_f(k)).abs() < 1e-9);
            prop_assert!((f.1 - to_f(p)).abs() < 1e-9);
            prop_assert!((f.2 - to_f(pe)).abs() < 1e-9);
        }
    }

    #[test]
    fn rater_order_within_items_is_irrelevant(labels in prop::collection::vec(prop::collection::vec(prop::bool::ANY, 3), 1..10)) {
        let to_map = |rev: bool| -> BTreeMap<String, Vec<Label>> {
            labels
                .iter()
                .enumerate()
                .map(|(i, ls)| {
                    let mut v: Vec<Label> = ls.iter().map(|&g| if g { Label::Good } else { Label::Bad }).collect();
                    if rev {
                        v.reverse();
                    }
                    (format!("item{i}"), v)
                })
                .collect()
        };
        let a: Result<KappaReport<Rational>, _> = fleiss_kappa(&to_map(false), None);
        let b: Result<KappaReport<Rational>, _> = fleiss_kappa(&to_map(true), None);
        prop_assert_eq!(a, b);
    }
}
