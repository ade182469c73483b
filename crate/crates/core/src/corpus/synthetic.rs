//! Seeded generator of small, fully annotated corpora for fixtures and demos.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{domain_of, ActionTriplet, BeliefTriplet, Dialogue, Frame, SlotSpan, Speaker, Turn};

struct Service {
    name: &'static str,
    slots: &'static [(&'static str, &'static [&'static str])],
    ask: &'static str,
}

const SERVICES: &[Service] = &[
    Service {
        name: "Restaurants_1",
        slots: &[
            ("city", &["San Jose", "Oakland", "Palo Alto", "Berkeley"]),
            ("cuisine", &["Italian", "Thai", "Mexican", "Indian"]),
            ("party_size", &["2", "4", "6"]),
        ],
        ask: "a place to eat",
    },
    Service {
        name: "Hotels_2",
        slots: &[
            ("where_to", &["Seattle", "Portland", "Denver"]),
            ("number_of_adults", &["1", "2", "3"]),
            ("check_in_date", &["March 3rd", "next Friday", "tomorrow"]),
        ],
        ask: "somewhere to stay",
    },
    Service {
        name: "Movies_1",
        slots: &[
            ("location", &["Sunnyvale", "Fremont", "Santa Rosa"]),
            ("genre", &["comedy", "thriller", "drama"]),
            ("show_time", &["7 pm", "8:30 pm", "10 pm"]),
        ],
        ask: "a movie to watch",
    },
    Service {
        name: "RideSharing_2",
        slots: &[
            ("destination", &["the airport", "downtown", "the stadium"]),
            ("number_of_seats", &["1", "2", "3"]),
            ("ride_type", &["Pool", "Regular", "Luxury"]),
        ],
        ask: "a ride",
    },
    Service {
        name: "Events_1",
        slots: &[
            ("city_of_event", &["New York", "Chicago", "Boston"]),
            ("category", &["music", "sports"]),
            ("date", &["the 12th", "this weekend", "Sunday"]),
        ],
        ask: "something fun to do",
    },
];

const OPENERS: &[&str] = &["Hi, I am looking for", "Can you help me find", "I need", "Please find me"];

const FOLLOW_UPS: &[&str] = &[
    "Sounds good, what else can you tell me?",
    "Okay, that works for me.",
    "Great, please go ahead.",
    "Hmm, is there anything else?",
];

/// `n` dialogues over a handful of services, each with 4 to 10 exchanges,
/// belief on user turns, actions on system turns and slot spans on every
/// system utterance that mentions a value.
pub fn synthetic_corpus(n: usize, seed: u64) -> Vec<Dialogue> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|i| synthetic_dialogue(&mut rng, &format!("syn_{i:04}"))).collect()
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.random_range(0..items.len())]
}

fn system_turn(index: usize, service: &Service, utterance: String, spans: Vec<SlotSpan>, acts: &[(&str, &str)]) -> Turn {
    let domain = domain_of(service.name);
    let mut frame = Frame::new(service.name);
    frame.slot_spans = spans;
    frame.actions = acts.iter().map(|(a, s)| ActionTriplet::new(domain.clone(), *a, *s)).collect();
    Turn::new(index, Speaker::System, utterance).with_frame(frame)
}

fn span_of(utterance: &str, slot: &str, value: &str) -> SlotSpan {
    let byte = utterance.find(value).expect("value present in utterance");
    let start = utterance[..byte].chars().count();
    SlotSpan::new(slot, start, start + value.chars().count())
}

fn synthetic_dialogue(rng: &mut ChaCha8Rng, id: &str) -> Dialogue {
    let service = pick(rng, SERVICES);
    let domain = domain_of(service.name);
    let exchanges = rng.random_range(4..=10);
    let mut belief: BTreeSet<BeliefTriplet> = BTreeSet::new();
    let mut turns = Vec::new();

    for x in 0..exchanges {
        let (slot, values) = service.slots[x % service.slots.len()];
        let value = *pick(rng, values);
        let user = if x == 0 {
            format!("{} {} with {} {}.", pick(rng, OPENERS), service.ask, slot.replace('_', " "), value)
        } else if x < service.slots.len() {
            format!("Make it {value} for the {}.", slot.replace('_', " "))
        } else {
            pick(rng, FOLLOW_UPS).to_string()
        };
        if x < service.slots.len() {
            belief.insert(BeliefTriplet::new(domain.clone(), slot, value));
        }
        let mut frame = Frame::new(service.name);
        frame.belief = belief.clone();
        turns.push(Turn::new(turns.len(), Speaker::User, user).with_frame(frame));

        let index = turns.len();
        let last = x + 1 == exchanges;
        let sys = if last {
            system_turn(index, service, "Your request is all set. Is there anything else?".into(), vec![], &[
                ("notify_success", ""),
                ("req_more", ""),
            ])
        } else {
            match rng.random_range(0..4) {
                0 => {
                    let u = format!("I found {} options with {value}.", rng.random_range(2..9));
                    let span = span_of(&u, slot, value);
                    system_turn(index, service, u, vec![span], &[("inform_count", ""), ("offer", slot)])
                }
                1 => {
                    let u = format!("Just to confirm, you want {value}?");
                    let span = span_of(&u, slot, value);
                    system_turn(index, service, u, vec![span], &[("confirm", slot)])
                }
                2 => {
                    let next = service.slots[(x + 1) % service.slots.len()].0;
                    let u = format!("Which {} would you like?", next.replace('_', " "));
                    system_turn(index, service, u, vec![], &[("request", next)])
                }
                _ => {
                    let u = format!(
                        "There is a good match with {value}, and it has great reviews from people who went there \
                         recently, so I think you will enjoy it a lot."
                    );
                    let span = span_of(&u, slot, value);
                    system_turn(index, service, u, vec![span], &[("offer", slot), ("inform", "rating")])
                }
            }
        };
        turns.push(sys);
    }
    Dialogue { id: id.to_string(), services: vec![service.name.to_string()], turns }
}
