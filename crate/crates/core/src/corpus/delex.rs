use super::{CorpusError, Frame};

/// `[<domain>_<slot>]`, lowercased with spaces folded to underscores.
pub fn placeholder(domain: &str, slot: &str) -> String {
    format!("[{}_{}]", domain.to_lowercase(), slot.to_lowercase()).replace(' ', "_")
}

/// Replace every annotated slot span in `utterance` with its placeholder.
///
/// Spans are character offsets into `utterance`; text outside spans is copied
/// through unchanged.
pub fn delexicalize(utterance: &str, frames: &[Frame]) -> Result<String, CorpusError> {
    let mut spans: Vec<(usize, usize, String)> = frames
        .iter()
        .flat_map(|f| {
            let domain = f.domain();
            f.slot_spans.iter().map(move |s| (s.start, s.end, placeholder(&domain, &s.slot)))
        })
        .collect();
    if spans.is_empty() {
        return Ok(utterance.to_string());
    }

    // byte offset of every char boundary, plus the end
    let boundaries: Vec<usize> = utterance
        .char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(utterance.len()))
        .collect();
    let len = boundaries.len() - 1;

    spans.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    for (start, end, _) in &spans {
        if start >= end || *end > len {
            return Err(CorpusError::SpanOutOfBounds { start: *start, end: *end, len });
        }
    }
    for w in spans.windows(2) {
        if w[1].0 < w[0].1 {
            return Err(CorpusError::OverlappingSpans { first: (w[0].0, w[0].1), second: (w[1].0, w[1].1) });
        }
    }

    let mut out = utterance.to_string();
    for (start, end, ph) in spans.iter().rev() {
        out.replace_range(boundaries[*start]..boundaries[*end], ph);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::SlotSpan;

    fn frame(service: &str, spans: &[(&str, usize, usize)]) -> Frame {
        let mut f = Frame::new(service);
        f.slot_spans = spans.iter().map(|&(s, a, b)| SlotSpan::new(s, a, b)).collect();
        f
    }

    #[test]
    fn ride_fare_placeholder() {
        let text = "The cost is $12.";
        let start = text.find("$12").unwrap();
        let f = frame("RideSharing_2", &[("ride_fare", start, start + 3)]);
        assert_eq!(delexicalize(text, &[f]).unwrap(), "The cost is [ridesharing_ride_fare].");
    }

    #[test]
    fn no_spans_is_identity() {
        assert_eq!(delexicalize("Enjoy your day.", &[Frame::new("Events_1")]).unwrap(), "Enjoy your day.");
    }

    #[test]
    fn two_spans_replaced() {
        // "Booking 1 ticket for Lady Gaga." -- hand-located offsets
        let text = "Booking 1 ticket for Lady Gaga.";
        let f = frame("Events_1", &[("event_name", 21, 30), ("number_of_seats", 8, 9)]);
        assert_eq!(
            delexicalize(text, &[f]).unwrap(),
            "Booking [events_number_of_seats] ticket for [events_event_name]."
        );
    }

    #[test]
    fn multibyte_offsets_are_characters() {
        let text = "Café Rio is at 5 €.";
        let f = frame("Restaurants_1", &[("restaurant_name", 0, 8)]);
        assert_eq!(delexicalize(text, &[f]).unwrap(), "[restaurants_restaurant_name] is at 5 €.");
    }

    #[test]
    fn overlap_is_rejected() {
        let f = frame("A", &[("x", 0, 4), ("y", 3, 6)]);
        assert!(matches!(delexicalize("abcdefgh", &[f]), Err(CorpusError::OverlappingSpans { .. })));
    }

    #[test]
    fn idempotent_on_delexicalized_text() {
        let once = "The cost is [ridesharing_ride_fare].";
        assert_eq!(delexicalize(once, &[Frame::new("RideSharing_2")]).unwrap(), once);
    }
}
