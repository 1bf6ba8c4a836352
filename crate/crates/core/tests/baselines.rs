use proptest::prelude::*;
use sprofile::baselines::{MaxHeap, MinHeap, OrderStatisticTree};
use sprofile::{LogEvent, Oracle};

fn stream() -> impl Strategy<Value = (u32, Vec<LogEvent>)> {
    (1u32..=20).prop_flat_map(|m| {
        let ev = (1..=m, any::<bool>()).prop_map(|(x, add)| {
            if add { LogEvent::add(x) } else { LogEvent::remove(x) }.unwrap()
        });
        (Just(m), prop::collection::vec(ev, 0..150))
    })
}

proptest! {
    #[test]
    fn heaps_track_extremes((m, events) in stream()) {
        let mut max = MaxHeap::new(m as usize).unwrap();
        let mut min = MinHeap::new(m as usize).unwrap();
        let mut o = Oracle::new(m as usize).unwrap();
        for e in events {
            max.apply(e).unwrap();
            min.apply(e).unwrap();
            o.apply(e).unwrap();
            let s = o.snapshot();
            let (x, f) = max.peek();
            prop_assert_eq!(f, s.mode().frequency);
            prop_assert_eq!(o.frequency(x).unwrap(), f);
            let (x, f) = min.peek();
            prop_assert_eq!(f, s.min_objects().frequency);
            prop_assert_eq!(o.frequency(x).unwrap(), f);
        }
        prop_assert!(max.audit().is_ok() && min.audit().is_ok());
    }

    #[test]
    fn tree_answers_every_rank((m, events) in stream(), seed in any::<u64>()) {
        let mut t = OrderStatisticTree::with_seed(m as usize, seed).unwrap();
        let mut o = Oracle::new(m as usize).unwrap();
        for e in events {
            t.apply(e).unwrap();
            o.apply(e).unwrap();
        }
        prop_assert!(t.audit().is_ok());
        let s = o.snapshot();
        for k in 1..=m as usize {
            let (f, x) = t.kth(k).unwrap();
            prop_assert_eq!(f, s.sorted()[k - 1]);
            prop_assert_eq!(o.frequency(x).unwrap(), f);
        }
        prop_assert_eq!(t.median().0, s.median());
    }
}
