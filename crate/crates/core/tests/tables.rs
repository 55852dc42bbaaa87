use orbispec::tables::{
    delta0, delta_k, dolbeault_spectrum, hodge_spectrum, mckean_bound, Field, HyperbolicSpace,
};
use proptest::prelude::*;

#[test]
fn real_three_space_row() {
    let h3 = HyperbolicSpace::real(3).unwrap();
    let row: Vec<f64> = (0..=3).map(|k| delta_k(&h3, k).unwrap()).collect();
    assert_eq!(row, vec![1.0, 0.0, 0.0, 1.0]);
}

#[test]
fn complex_plane_row() {
    let c2 = HyperbolicSpace::complex(2).unwrap();
    let row: Vec<f64> = (0..=4).map(|k| delta_k(&c2, k).unwrap()).collect();
    assert_eq!(row, vec![4.0, 1.0, 1.0, 1.0, 4.0]);
    assert_eq!(hodge_spectrum(&c2, 2).unwrap().to_string(), "{0}∪[1,∞)");
}

#[test]
fn bottoms_agree_at_the_plane() {
    assert_eq!(delta0(2, 1).unwrap(), 0.25);
    assert_eq!(mckean_bound(2, 1.0).unwrap(), 0.25);
}

fn real_degree() -> impl Strategy<Value = (u32, i64)> {
    (2u32..=12).prop_flat_map(|m| (Just(m), 0..=m as i64))
}

fn complex_degree() -> impl Strategy<Value = (u32, i64)> {
    (1u32..=6).prop_flat_map(|r| (Just(r), 0..=2 * r as i64))
}

fn dolbeault_degree() -> impl Strategy<Value = (i64, i64, i64)> {
    (1i64..=5)
        .prop_flat_map(|r| (Just(r), 0..=r))
        .prop_flat_map(|(r, p)| (Just(r), Just(p), 0..=r))
}

proptest! {
    #[test]
    fn hodge_duality((m, k) in real_degree()) {
        let space = HyperbolicSpace::real(m).unwrap();
        let a = delta_k(&space, k).unwrap();
        let b = delta_k(&space, m as i64 - k).unwrap();
        prop_assert_eq!(a, b);
        prop_assert_eq!(hodge_spectrum(&space, k).unwrap(), hodge_spectrum(&space, m as i64 - k).unwrap());
    }

    #[test]
    fn isolated_zero_only_in_middle_degree((m, k) in real_degree()) {
        let space = HyperbolicSpace::real(m).unwrap();
        let spec = hodge_spectrum(&space, k).unwrap();
        prop_assert_eq!(spec.points().contains(&0.0), 2 * k == m as i64);
        prop_assert_eq!(spec.contains(0.0), 2 * k == m as i64 || delta_k(&space, k).unwrap() == 0.0);
        prop_assert_eq!(delta_k(&space, 0).unwrap(), delta0(m as i64, 1).unwrap());
    }

    #[test]
    fn complex_rows_are_symmetric((rank, k) in complex_degree()) {
        let space = HyperbolicSpace::complex(rank).unwrap();
        let m = space.m() as i64;
        prop_assert_eq!(delta_k(&space, k).unwrap(), delta_k(&space, m - k).unwrap());
        prop_assert_eq!(space.field(), Field::C);
    }

    #[test]
    fn dolbeault_bottoms_split_by_degree((rank, p, q) in dolbeault_degree()) {
        let spec = dolbeault_spectrum(rank, p, q).unwrap();
        prop_assert_eq!(spec.contains(0.0), p + q == rank);
        prop_assert!(spec.contains(1.0e6));
    }
}
