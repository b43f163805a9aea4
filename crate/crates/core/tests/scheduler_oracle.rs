mod common;

use common::{d2d_samples, random_case, reference_cell, reference_d2d};
use oppmcn::replay::{parse_trace, replay, format_trace};
use oppmcn::sched::LinkTag;

fn check(seed: u64, n: usize) {
    let (samples, cfg) = random_case(seed, n);
    let out = replay(&samples, &cfg).unwrap();
    let d2d = reference_d2d(&d2d_samples(&samples), &cfg.d2d, cfg.d2d_initial);
    let (cell, dropped) = reference_cell(&samples, &cfg.cell, cfg.cell_initial);
    assert_eq!(out.link(LinkTag::D2d).records, d2d, "d2d, seed {seed}, {cfg:?}");
    assert_eq!(out.link(LinkTag::Cell).records, cell, "cell, seed {seed}, {cfg:?}");
    assert_eq!(out.dropped_grants, dropped, "seed {seed}");
}

#[test]
fn replay_matches_reference_on_random_traces() {
    for seed in 0..200 {
        check(seed, 3000);
    }
}

#[test]
fn traces_with_many_transitions_exist() {
    // the generator must actually exercise both directions on both links
    let mut counts = [0usize; 4];
    for seed in 0..50 {
        let (samples, cfg) = random_case(seed, 3000);
        let out = replay(&samples, &cfg).unwrap();
        for r in &out.records {
            let i = (r.link == LinkTag::Cell) as usize * 2 + (r.event == oppmcn::sched::DecisionEvent::Resume) as usize;
            counts[i] += 1;
        }
    }
    assert!(counts.iter().all(|&c| c > 50), "{counts:?}");
}

#[test]
fn formatted_trace_replays_identically() {
    let (samples, cfg) = random_case(7, 2000);
    let back = parse_trace(&format_trace(&samples)).unwrap();
    assert_eq!(replay(&back, &cfg).unwrap(), replay(&samples, &cfg).unwrap());
}
