use dqrrt_core::collision::{edge_clear_dq, edge_clear_se3, point_clear};
use dqrrt_core::planner::{near_set, nearest, Tree};
use dqrrt_core::pose_space::{pose_distance, steer_dq, steer_se3};
use dqrrt_core::*;
use proptest::prelude::*;

fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    (-range..range, -range..range, -range..range).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn rotation() -> impl Strategy<Value = Quaternion> {
    (vec3(1.0), -4.0..4.0f64).prop_map(|(axis, angle)| Quaternion::from_axis_angle(axis, angle))
}

fn pose() -> impl Strategy<Value = Pose> {
    (rotation(), vec3(20.0)).prop_map(|(r, t)| Pose::new(r, t))
}

fn dq() -> impl Strategy<Value = DualQuaternion> {
    pose().prop_map(|p| DualQuaternion::from_pose(&p).unwrap())
}

fn close_up_to_sign(a: &DualQuaternion, b: &DualQuaternion, tol: f64) -> bool {
    let diff = |x: [f64; 8], y: [f64; 8]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    diff(a.to_array(), b.to_array()).min(diff(a.to_array(), (-*b).to_array())) <= tol
}

fn obstacles() -> impl Strategy<Value = ObstacleSet> {
    prop::collection::vec((vec3(15.0), 0.5..6.0f64), 0..6)
        .prop_map(|zs| ObstacleSet::new(zs.into_iter().map(|(c, r)| KeepOutZone::new(c, r)).collect()))
}

proptest! {
    #[test]
    fn pow_exponents_add(q in dq(), a in -1.0..1.0f64, b in -1.0..1.0f64) {
        prop_assert!(close_up_to_sign(&(q.pow(a) * q.pow(b)), &q.pow(a + b), 1e-8));
    }

    #[test]
    fn pose_decoding_ignores_sign(q in dq()) {
        let (p, n) = (q.to_pose().unwrap(), (-q).to_pose().unwrap());
        prop_assert!(p.translation.distance(n.translation) < 1e-12);
        prop_assert!(p.rotation.geodesic(n.rotation) < 1e-12);
    }

    #[test]
    fn sclerp_stays_unit(a in dq(), b in dq(), s in 0.0..=1.0f64) {
        prop_assert!(a.sclerp(&b, s).is_unit(1e-9));
    }

    #[test]
    fn steer_dq_never_exceeds_step(
        near in dq(), target in dq(), step in 0.05..10.0f64, wr in 0.0..5.0f64,
    ) {
        let w = MetricWeights::new(1.0, wr);
        let out = steer_dq(&near, &target, &w, &SteerConfig::new(step));
        prop_assert!(out.is_unit(1e-9));
        prop_assert!(pose_distance(&near, &out, &w) <= step + 1e-9);
        if pose_distance(&near, &target, &w) <= step {
            prop_assert_eq!(out, target);
        }
    }

    #[test]
    fn steering_laws_agree_without_rotation(a in vec3(50.0), b in vec3(50.0), step in 0.1..20.0f64) {
        let w = MetricWeights::default();
        let cfg = SteerConfig::new(step);
        let dq = steer_dq(&DualQuaternion::from_translation(a), &DualQuaternion::from_translation(b), &w, &cfg);
        let se3 = steer_se3(&Pose::from_translation(a), &Pose::from_translation(b), &w, &cfg);
        prop_assert!(dq.translation().distance(se3.translation) < 1e-9);
    }

    #[test]
    fn finer_discretization_keeps_every_violation(
        a in dq(), b in dq(), obs in obstacles(), step in 0.2..4.0f64, shrink in 0.05..1.0f64,
    ) {
        let w = MetricWeights::default();
        let coarse = SteerConfig { step_max: 10.0, collision_step: step };
        let fine = SteerConfig { step_max: 10.0, collision_step: step * shrink };
        if !edge_clear_dq(&a, &b, &obs, &coarse, &w) {
            prop_assert!(!edge_clear_dq(&a, &b, &obs, &fine, &w));
        }
        let (pa, pb) = (Pose::new(a.real, a.translation()), Pose::new(b.real, b.translation()));
        if !edge_clear_se3(&pa, &pb, &obs, &coarse, &w) {
            prop_assert!(!edge_clear_se3(&pa, &pb, &obs, &fine, &w));
        }
    }

    #[test]
    fn clearance_ignores_rotation(
        ta in vec3(20.0), tb in vec3(20.0), ra in rotation(), rb in rotation(), obs in obstacles(),
    ) {
        let w = MetricWeights::new(1.0, 0.0);
        let cfg = SteerConfig::new(2.0);
        let plain = edge_clear_se3(&Pose::from_translation(ta), &Pose::from_translation(tb), &obs, &cfg, &w);
        let turned = edge_clear_se3(&Pose::new(ra, ta), &Pose::new(rb, tb), &obs, &cfg, &w);
        prop_assert_eq!(plain, turned);
        prop_assert_eq!(point_clear(ta, &obs), obs.zones.iter().all(|z| ta.distance(z.center) > z.radius));
    }

    #[test]
    fn neighbor_queries_match_brute_force(
        poses in prop::collection::vec(dq(), 1..100), q in dq(), radius in 0.0..30.0f64,
    ) {
        let w = MetricWeights::default();
        let mut tree = Tree::new(poses[0], w);
        for (i, p) in poses.iter().enumerate().skip(1) {
            tree.add(*p, i / 2);
        }
        let d: Vec<f64> = poses.iter().map(|p| pose_distance(p, &q, &w)).collect();
        let best = (0..d.len()).fold(0, |b, i| if d[i] < d[b] { i } else { b });
        prop_assert_eq!(nearest(tree.nodes(), &q, &w).unwrap(), best);
        let within: Vec<usize> = (0..d.len()).filter(|&i| d[i] <= radius).collect();
        prop_assert_eq!(near_set(tree.nodes(), &q, radius, &w), within);
    }

    #[test]
    fn rewiring_keeps_tree_consistent(
        poses in prop::collection::vec(vec3(20.0), 2..40),
        picks in prop::collection::vec((0usize..1000, 0.0..40.0f64), 1..20),
    ) {
        let w = MetricWeights::default();
        let dqs: Vec<DualQuaternion> = poses.iter().map(|&t| DualQuaternion::from_translation(t)).collect();
        let mut tree = Tree::new(dqs[0], w);
        for (i, p) in dqs.iter().enumerate().skip(1) {
            tree.add(*p, (i * 7 + 3) % i);
        }
        for (pick, radius) in picks {
            let id = pick % tree.len();
            let before: Vec<f64> = (0..tree.len()).map(|i| tree.cost(i)).collect();
            let neighbors = tree.near_set(&tree.nodes()[id].pose, radius);
            tree.rewire(id, &neighbors, |_, _| true);
            prop_assert!(tree.check_consistency(1e-9).is_ok());
            for (i, c) in before.iter().enumerate() {
                prop_assert!(tree.cost(i) <= c + 1e-9);
            }
        }
    }
}
