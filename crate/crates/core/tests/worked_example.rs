//! The three-by-three transfer market worked through by hand: deferred
//! acceptance, propose–dispose with ε = 1, then strategy modification.

use matchgame::engine::{propose_dispose, replay, solve, stabilize, Event, Market};
use matchgame::model::{MatchingGame, Matrix, StrategyAssignment};
use matchgame::transfers::{nash_stable_matching, TransferInstance};
use matchgame::verify::{external_stability, internal_stability};

fn instance() -> TransferInstance {
    let a = Matrix::from_rows(vec![
        vec![83.0, 85.0, 99.0],
        vec![74.0, 13.0, 15.0],
        vec![58.0, 49.0, 54.0],
    ])
    .unwrap();
    let b = Matrix::from_rows(vec![
        vec![69.0, 6.0, 28.0],
        vec![88.0, 2.0, 70.0],
        vec![72.0, 18.0, 9.0],
    ])
    .unwrap();
    TransferInstance::new(a, b, vec![0.0; 3], vec![0.0; 3]).unwrap()
}

fn market() -> MatchingGame {
    instance().to_game(1.0).unwrap()
}

const ORDER: [usize; 3] = [0, 2, 1];

fn transfers_of(g: &MatchingGame, p: &matchgame::model::MatchingProfile) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; g.men()];
    let mut y = vec![0.0; g.women()];
    for (i, j, a) in p.couples() {
        if let StrategyAssignment::Transfer { x: xi, y: yj } = a {
            x[i] = *xi;
            y[j] = *yj;
        }
    }
    (x, y)
}

#[test]
fn propose_dispose_reaches_the_hand_computed_profile() {
    let g = market();
    let (p, trace) = propose_dispose(&g, &ORDER, 1.0).unwrap();
    assert_eq!(p.partners(), &[Some(2), Some(0), Some(1)]);
    assert_eq!(transfers_of(&g, &p), (vec![0.0; 3], vec![24.0, 17.0, 27.0]));
    assert_eq!(p.u(), &[126.0, 98.0, 66.0]);
    assert_eq!(p.v(), &[64.0, 1.0, 1.0]);
    assert_eq!(trace.iterations, 5);
    assert!(external_stability(&g, &p, 1.0).unwrap().externally_stable);
}

#[test]
fn propose_dispose_trace_values() {
    let g = market();
    let (_, trace) = propose_dispose(&g, &ORDER, 1.0).unwrap();
    let proposals: Vec<(usize, Option<usize>, f64)> = trace
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Propose { man, woman, value } => Some((*man, *woman, *value)),
            _ => None,
        })
        .collect();
    // Second proposal: 58 + 72 − (1 + 1), since j1 already holds 1.
    assert_eq!(
        proposals,
        vec![
            (0, Some(0), 151.0),
            (2, Some(0), 128.0),
            (1, Some(0), 135.0),
            (0, Some(2), 126.0),
            (2, Some(1), 66.0)
        ]
    );
    let competitions: Vec<((f64, f64), (f64, f64))> = trace
        .events
        .iter()
        .filter_map(|e| match e {
            Event::Compete {
                reservations, bids, ..
            } => Some((*reservations, *bids)),
            _ => None,
        })
        .collect();
    assert_eq!(
        competitions,
        vec![((66.0, 126.0), (64.0, 26.0)), ((84.0, 66.0), (78.0, 64.0))]
    );
}

#[test]
fn outside_options_after_propose_dispose() {
    let g = market();
    let (p, _) = propose_dispose(&g, &ORDER, 1.0).unwrap();
    let m = Market::new(&g).unwrap();
    let u: Vec<f64> = (0..3)
        .map(|i| m.outside_options(&p, i, p.partner_of_man(i).unwrap(), 1.0).u_eps)
        .collect();
    assert_eq!(u, vec![89.0, 83.0, 65.0]);
}

#[test]
fn strategy_modification_drops_all_transfers() {
    let g = market();
    let (p, _) = propose_dispose(&g, &ORDER, 1.0).unwrap();
    let (q, trace) = stabilize(&g, &p, 1.0).unwrap();
    assert_eq!(q.partners(), p.partners());
    assert_eq!(transfers_of(&g, &q), (vec![0.0; 3], vec![0.0; 3]));
    assert_eq!(q.u(), &[99.0, 74.0, 49.0]);
    assert_eq!(q.v(), &[88.0, 18.0, 28.0]);
    assert_eq!(trace.sweeps, 2);
    let first_sweep: Vec<f64> = trace
        .events
        .iter()
        .filter_map(|e| match e {
            Event::CoupleUpdate { sweep: 1, outside, .. } => Some(outside.u_eps),
            _ => None,
        })
        .collect();
    assert_eq!(first_sweep, vec![89.0, 56.0, 41.0]);
    assert!(internal_stability(&g, &q, 1.0).unwrap().is_green());
}

#[test]
fn deferred_acceptance_agrees() {
    let p = nash_stable_matching(&instance());
    assert_eq!(p.partners(), &[Some(2), Some(0), Some(1)]);
    assert_eq!(transfers_of(&market(), &p), (vec![0.0; 3], vec![0.0; 3]));
}

#[test]
fn solve_and_replay() {
    let g = market();
    let out = solve(&g, &ORDER, 1.0).unwrap();
    assert!(out.report.is_green());
    assert_eq!(replay(&g, &out.trace).unwrap(), out.profile);
}
