use matchgame::competitive::detect_affine;
use matchgame::engine::{propose_dispose, solve, stabilize};
use matchgame::gen::{generate, random_profile, GenSpec};
use matchgame::linprog::{game_value, solve as lp_solve, LinearProgram, Mode, Relation, Sense, Status};
use matchgame::model::{GameClass, MatchingGame, Matrix, StrategyAssignment};
use matchgame::rational::{self, Rational};
use matchgame::transfers::{cne_transfer, nash_stable_matching, TransferInstance};
use matchgame::verify::{external_stability, internal_stability};
use matchgame::zerosum::{cne, median3};
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-10i32..=10, rows * cols)
        .prop_map(move |v| Matrix::new(rows, cols, v.into_iter().map(f64::from).collect()).unwrap())
}

fn any_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))
}

fn market(class: GameClass) -> impl Strategy<Value = MatchingGame> {
    (1usize..=4, 1usize..=4, 1usize..=3, any::<u64>(), prop::bool::ANY).prop_map(move |(m, w, n, seed, fine)| {
        let mut s = GenSpec::new(class, m, w, n, seed);
        s.epsilon = if fine { 0.25 } else { 1.0 };
        generate(&s).unwrap()
    })
}

fn transfer_instance() -> impl Strategy<Value = TransferInstance> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(m, w)| {
        (matrix(m, w), matrix(m, w), prop::collection::vec(-5i32..=0, m), prop::collection::vec(-5i32..=0, w)).prop_map(
            |(a, b, im, iw)| {
                TransferInstance::new(
                    a,
                    b,
                    im.into_iter().map(f64::from).collect(),
                    iw.into_iter().map(f64::from).collect(),
                )
                .unwrap()
            },
        )
    })
}

fn identity(n: usize) -> Vec<usize> {
    (0..n).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn zero_sum_payoffs_cancel(g in market(GameClass::ZeroSum)) {
        let out = solve(&g, &identity(g.men()), g.epsilon()).unwrap();
        for (i, j, _) in out.profile.couples() {
            prop_assert!((out.profile.u()[i] + out.profile.v()[j]).abs() <= 1e-9);
        }
    }

    #[test]
    fn transfer_couples_split_a_constant_sum(g in market(GameClass::LinearTransfer)) {
        let out = solve(&g, &identity(g.men()), g.epsilon()).unwrap();
        for (i, j, a) in out.profile.couples() {
            let StrategyAssignment::Transfer { x, y } = a else { panic!("transfer couple") };
            prop_assert!(x.min(*y) == 0.0);
            if let matchgame::model::CoupleGame::LinearTransfer { a, b } = g.game(i, j) {
                prop_assert!((out.profile.u()[i] + out.profile.v()[j] - a - b).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn women_never_lose_during_propose_dispose(
        g in prop_oneof![
            market(GameClass::ZeroSum),
            market(GameClass::StrictlyCompetitive),
            market(GameClass::LinearTransfer),
        ]
    ) {
        let (p, trace) = propose_dispose(&g, &identity(g.men()), g.epsilon()).unwrap();
        for (j, seq) in trace.women_payoffs(g.women()).iter().enumerate() {
            let mut last = g.irp_woman(j);
            for &v in seq {
                prop_assert!(v >= last + g.epsilon() - 1e-9, "woman {j}: {last} -> {v}");
                last = v;
            }
        }
        prop_assert!(external_stability(&g, &p, g.epsilon()).unwrap().externally_stable);
    }

    #[test]
    fn strategy_modification_keeps_both_stabilities(
        g in prop_oneof![
            market(GameClass::ZeroSum),
            market(GameClass::StrictlyCompetitive),
            market(GameClass::LinearTransfer),
        ]
    ) {
        let eps = g.epsilon();
        let (p, _) = propose_dispose(&g, &identity(g.men()), eps).unwrap();
        let (q, _) = stabilize(&g, &p, eps).unwrap();
        prop_assert_eq!(q.partners(), p.partners());
        let r = internal_stability(&g, &q, eps).unwrap();
        prop_assert!(r.is_green(), "{r:?}");
    }

    #[test]
    fn cne_transfer_is_idempotent(
        inst in transfer_instance(),
        u in -10.0f64..20.0,
        v in -10.0f64..20.0,
        x in 0.0f64..30.0,
        y in 0.0f64..30.0,
    ) {
        let once = cne_transfer(&inst, 0, 0, u, v, (x, y));
        prop_assert!(once.0 <= x && once.1 <= y);
        prop_assert_eq!(cne_transfer(&inst, 0, 0, u, v, once), once);
    }

    #[test]
    fn deferred_acceptance_has_no_blocking_pair(inst in transfer_instance()) {
        let p = nash_stable_matching(&inst);
        let (u, v) = (p.u(), p.v());
        for i in 0..inst.men() {
            prop_assert!(u[i] >= inst.irp_men[i]);
            for j in 0..inst.women() {
                if p.partner_of_man(i) != Some(j) {
                    let (a, b) = (*inst.a.get(i, j), *inst.b.get(i, j));
                    prop_assert!(!(a > u[i] && b > v[j]), "({i}, {j}) blocks");
                }
            }
        }
        for j in 0..inst.women() {
            prop_assert!(v[j] >= inst.irp_women[j]);
        }
    }

    #[test]
    fn shifting_transfer_base_shifts_men(inst in transfer_instance(), c in -5i32..=5, seed in any::<u64>()) {
        let c = f64::from(c);
        let shifted = TransferInstance::new(
            inst.a.map(|x| x + c),
            inst.b.clone(),
            inst.irp_men.iter().map(|x| x + c).collect(),
            inst.irp_women.clone(),
        )
        .unwrap();
        let (g, h) = (inst.to_game(1.0).unwrap(), shifted.to_game(1.0).unwrap());
        let order = identity(g.men());
        let (p, _) = propose_dispose(&g, &order, 1.0).unwrap();
        let (q, _) = propose_dispose(&h, &order, 1.0).unwrap();
        prop_assert_eq!(p.partners(), q.partners());
        for i in 0..g.men() {
            prop_assert!((q.u()[i] - p.u()[i] - c).abs() <= 1e-9);
        }
        prop_assert_eq!(p.v(), q.v());

        // Same verdict on an arbitrary profile carried over to the shifted market.
        let r = random_profile(&g, seed).unwrap();
        let couples: Vec<_> = r.couples().map(|(i, j, a)| (i, j, a.clone())).collect();
        let r2 = matchgame::model::MatchingProfile::from_couples(&h, couples).unwrap();
        prop_assert_eq!(
            external_stability(&g, &r, 1.0).unwrap().externally_stable,
            external_stability(&h, &r2, 1.0).unwrap().externally_stable
        );
        prop_assert_eq!(
            internal_stability(&g, &r, 1.0).unwrap().is_green(),
            internal_stability(&h, &r2, 1.0).unwrap().is_green()
        );
    }

    #[test]
    fn game_value_strategies_certify_the_value(a in any_matrix()) {
        let g = game_value(&a).unwrap();
        let xa = a.apply_left(g.x_star.weights());
        let ay = a.apply_right(g.y_star.weights());
        prop_assert!(xa.iter().all(|&z| z >= g.w - 1e-9));
        prop_assert!(ay.iter().all(|&z| z <= g.w + 1e-9));
    }

    #[test]
    fn lp_solutions_are_feasible(
        c in prop::collection::vec(-5i32..=5, 3),
        rows in prop::collection::vec((prop::collection::vec(-5i32..=5, 3), 0i32..=10), 1..5),
    ) {
        let mut lp = LinearProgram::new(Sense::Max, c.iter().map(|&v| f64::from(v)).collect());
        for (coef, rhs) in &rows {
            lp.constrain(coef.iter().map(|&v| f64::from(v)).collect(), Relation::Le, f64::from(*rhs));
        }
        for k in 0..3 {
            lp.bound(k, Some(0.0), Some(10.0));
        }
        let s = lp_solve(&lp, Mode::Float).unwrap();
        prop_assert_eq!(s.status, Status::Optimal);
        prop_assert!(lp.max_violation(&s.point) <= 1e-9);
    }

    #[test]
    fn cne_value_is_the_median(a in any_matrix(), u in -12.0f64..12.0, width in 0.0f64..10.0, eps in 0.1f64..2.0) {
        let v = u - 2.0 * eps + width;
        let w = game_value(&a).unwrap().w;
        if (u - eps).max(a.min()) <= (v + eps).min(a.max()) {
            let c = cne(&a, u, v, eps).unwrap();
            let want = median3(u - 2.0 * eps, w, v + 2.0 * eps).clamp(a.min(), a.max());
            prop_assert!((c.value - want).abs() <= 1e-9, "{} vs {want}", c.value);
        }
    }

    #[test]
    fn affine_pairs_are_recovered(a in any_matrix(), lambda in 0.01f64..=5.0, mu in -5.0f64..=5.0) {
        let b = a.map(|x| lambda * x + mu);
        if a.max() > a.min() {
            let map = detect_affine(&a, &b).unwrap();
            let (src, dst) = match map.direction {
                matchgame::competitive::Direction::AtoB => (&a, &b),
                matchgame::competitive::Direction::BtoA => (&b, &a),
            };
            prop_assert!(map.alpha <= 1.0);
            let img = map.apply(src);
            prop_assert!(img.entries().iter().zip(dst.entries()).all(|(p, q)| (p - q).abs() < 1e-9));
        }
    }

    #[test]
    fn snap_recovers_small_fractions(n in -100_000i64..=100_000, d in 1i64..=1000) {
        let r = rational::ratio(n, d);
        prop_assert_eq!(rational::snap(rational::to_f64(&r)), r);
    }

    #[test]
    fn rational_text_round_trips(n in any::<i64>(), d in 1i64..=i64::MAX) {
        let r: Rational = rational::ratio(n, d);
        prop_assert_eq!(rational::parse(&rational::display(&r)), Some(r));
    }
}
