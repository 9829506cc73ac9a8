use vminor_core::constellation::{clique_pipeline, path_pipeline, CouplingKind};
use vminor_core::gen::{constellation_fixture, shape_fixture, Shape};

#[test]
fn path_pipeline_three_by_three() {
    use CouplingKind::*;
    let kinds = [UpHalf, CoUpHalf, DownHalf, CoDownHalf, UpHalf, DownHalf, CoUpHalf, CoDownHalf];
    let (g, c) = constellation_fixture(Shape::Path, 9, 0, 2320, &kinds).unwrap();
    let out = path_pipeline(&g, &c, 3).unwrap();
    assert!(out.verify(&g).unwrap());
    assert_eq!(out.grid.len(), 9);
    assert_eq!(out.stages.last().unwrap().k, 9);
}

#[test]
fn seeded_shape_fixtures_run_through() {
    for seed in 0..4 {
        let (g, c) = shape_fixture(Shape::Path, 2, seed).unwrap();
        assert!(path_pipeline(&g, &c, 2).unwrap().verify(&g).unwrap());
        let (g, c) = shape_fixture(Shape::Clique, 2, seed).unwrap();
        assert!(clique_pipeline(&g, &c, 2).unwrap().verify(&g).unwrap());
    }
}
