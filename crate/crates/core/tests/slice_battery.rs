mod common;

use momentlab::lattice::{is_rational_subspace, null_subgroup_closed};
use momentlab::models::{
    cleanness_on_stratum, dphi_identities, intersect_local_cones, moment_image,
    symplectization_check,
};
use momentlab::morse::full_critical_set;
use momentlab::polyhedra::{affine_span, poly_equal, Polyhedron};

const SLICES: usize = 30;

#[test]
fn image_matches_brute_force_oracle() {
    for (i, s) in common::random_bounded_slices(11, SLICES).iter().enumerate() {
        let (image, _) = moment_image(s).unwrap();
        let oracle = common::brute_force_image(s);
        assert!(poly_equal(&image, &oracle).unwrap(), "slice {i}");
    }
}

#[test]
fn vertex_hull_and_local_cones_recover_the_image() {
    for (i, s) in common::random_bounded_slices(12, SLICES).iter().enumerate() {
        let oracle = common::brute_force_image(s);
        let v = full_critical_set(s).unwrap();
        let d = s.module().torus_rank();
        let hull = Polyhedron::convex_hull(d, &v.images).unwrap();
        assert!(poly_equal(&hull, &oracle).unwrap(), "hull, slice {i}");
        assert!(v.holds(), "slice {i}");
        let cones = intersect_local_cones(s).unwrap();
        assert!(poly_equal(&cones, &oracle).unwrap(), "cones, slice {i}");
    }
}

#[test]
fn reports_are_consistent() {
    for (i, s) in common::random_bounded_slices(13, SLICES).iter().enumerate() {
        let (image, rep) = moment_image(s).unwrap();
        assert!(rep.consistent(), "slice {i}");
        assert!(
            rep.affine_span_matches && rep.symplectization_matches,
            "slice {i}"
        );
        // the affine span of the image is lambda + W
        let span = affine_span(&image).unwrap();
        assert_eq!(&span.direction, s.direction(), "slice {i}");
        assert_eq!(
            null_subgroup_closed(s),
            is_rational_subspace(s.direction()),
            "slice {i}"
        );
        assert_eq!(
            rep.null_subgroup_closed,
            rep.quasilattice.rank == rep.quasilattice.quotient_dim
        );
    }
}

#[test]
fn strata_are_clean_and_satisfy_the_linear_identities() {
    for (i, s) in common::random_bounded_slices(14, SLICES).iter().enumerate() {
        for st in s.strata() {
            assert!(
                cleanness_on_stratum(s, &st.support).unwrap().clean,
                "slice {i} {:?}",
                st.support
            );
            let e = s.representative(&st.support);
            assert!(
                dphi_identities(s, &e).unwrap(),
                "slice {i} {:?}",
                st.support
            );
            assert!(
                symplectization_check(s, &e).unwrap().holds(),
                "slice {i} {:?}",
                st.support
            );
        }
    }
}
