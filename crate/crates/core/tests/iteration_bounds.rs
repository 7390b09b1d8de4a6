use matchgame::engine::{iteration_cap, iteration_cap_total, propose_dispose};
use matchgame::model::Matrix;
use matchgame::transfers::TransferInstance;

/// Two men who each want a different woman: every woman is raised once, so
/// the run needs one iteration per woman while `V^max / ε` is 1.
#[test]
fn two_disjoint_couples_exceed_the_single_woman_cap() {
    let a = Matrix::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
    let b = Matrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
    let g = TransferInstance::new(a, b, vec![0.0; 2], vec![0.0; 2]).unwrap().to_game(1.0).unwrap();
    let (p, trace) = propose_dispose(&g, &[0, 1], 1.0).unwrap();
    assert_eq!(p.partners(), &[Some(0), Some(1)]);
    assert_eq!(trace.iterations, 2);
    assert_eq!(iteration_cap(&g, 1.0).unwrap(), 1);
    assert_eq!(iteration_cap_total(&g, 1.0).unwrap(), 2);
}
