use chitchat_core::annotation::{aggregate, AnnotationRecord, Label};
use chitchat_core::arranger::{
    make_arrangements, target_choice, Choice, ChoiceRequest, ChoiceScorer, GatedArranger, TableChoiceScorer,
};
use chitchat_core::backend::BackendError;
use chitchat_core::generation::{CandidateSource, ChitChatCandidate, Position};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Mutex;

/// Random normalized probabilities on every call.
struct RandomScorer(Mutex<ChaCha8Rng>);

impl ChoiceScorer for RandomScorer {
    fn probs(&self, _request: &ChoiceRequest) -> Result<Vec<f64>, BackendError> {
        let mut rng = self.0.lock().unwrap();
        let raw: Vec<f64> = (0..3).map(|_| rng.random_range(0.0..1.0) + 1e-3).collect();
        let sum: f64 = raw.iter().sum();
        Ok(raw.into_iter().map(|p| p / sum).collect())
    }
}

#[test]
fn output_is_one_of_three_arrangements() {
    let scorer = RandomScorer(Mutex::new(ChaCha8Rng::seed_from_u64(11)));
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..1000 {
        let task = format!("Your table for {} is booked.", rng.random_range(1..9));
        let chitchat = if rng.random_bool(0.1) { None } else { Some(format!("Enjoy your meal number {i}!")) };
        let threshold = if rng.random_bool(0.5) { Some(0.3) } else { None };
        let mut g = GatedArranger::new(&scorer, threshold).unwrap();
        let out = g.step(&[], &task, chitchat.as_deref()).unwrap();
        let options = make_arrangements(&task, chitchat.as_deref().unwrap_or("")).unwrap();
        assert!(options.contains(&out.arrangement), "{:?}", out.arrangement);
    }
}

#[test]
fn target_truth_table() {
    let cases = [
        (Label::Good, Position::Prepend, Choice::ChitchatFirst),
        (Label::Good, Position::Append, Choice::TaskFirst),
        (Label::Bad, Position::Prepend, Choice::TaskOnly),
        (Label::Bad, Position::Append, Choice::TaskOnly),
    ];
    for (label, position, expected) in cases {
        let c = ChitChatCandidate {
            id: "c".into(),
            dialogue_id: "d".into(),
            turn_index: 1,
            text: "Nice!".into(),
            position,
            source: CandidateSource { backend: "b".into(), params: "p".into() },
            parent_id: None,
        };
        let labeled = aggregate(c, vec![AnnotationRecord::new("c", "a", label)]).unwrap();
        assert_eq!(target_choice(&labeled), expected, "{label:?} {position:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gated_frequency_bounded_at_every_prefix(
        seed in any::<u64>(),
        offer in prop::collection::vec(prop::bool::weighted(0.8), 100),
    ) {
        let scorer = RandomScorer(Mutex::new(ChaCha8Rng::seed_from_u64(seed)));
        let mut g = GatedArranger::new(&scorer, Some(0.3)).unwrap();
        for (i, has) in offer.iter().enumerate() {
            let cc = format!("chit chat {i}");
            g.step(&[], "Done.", has.then_some(cc.as_str())).unwrap();
            let s = g.state();
            prop_assert_eq!(s.system_turns_so_far, i + 1);
            prop_assert!(s.frequency::<f64>() <= 0.3 + 1.0 / s.system_turns_so_far as f64);
        }
    }
}

#[test]
fn disabled_gate_follows_scorer() {
    let always = TableChoiceScorer::new([0.0, 1.0, 0.0]);
    let mut g = GatedArranger::new(&always, None).unwrap();
    for _ in 0..10 {
        assert_eq!(g.step(&[], "T", Some("C")).unwrap().arrangement.choice, Choice::TaskFirst);
    }
    assert_eq!(g.state().augmented_turns_so_far, 10);
    assert!(GatedArranger::new(&always, Some(0.0)).is_err());
}
