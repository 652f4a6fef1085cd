use std::ffi::{CStr, CString};
use std::ptr;

use zonecast_ffi::*;

fn last_error() -> String {
    let p = zc_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn fixture(name: &str) -> *mut ZcGraph {
    let name = CString::new(name).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { zc_graph_fixture(name.as_ptr(), &mut g) }, ZcStatus::Ok);
    g
}

#[test]
fn fig5_through_the_abi() {
    unsafe {
        let g = fixture("fig5");
        assert_eq!(zc_graph_node_count(g), 8);
        assert_eq!(zc_graph_edge_count(g), 11);
        let mut r = ptr::null_mut();
        assert_eq!(zc_construct_session(g, ZcOrder::EdgeOrder, &mut r), ZcStatus::Ok);
        assert_eq!(zc_result_group_k(r), 1);
        assert_eq!(zc_result_receiver_count(r), 3);
        let ks: Vec<usize> = (0..3)
            .map(|i| {
                let mut k = 0;
                assert_eq!(zc_result_receiver_k(r, i, &mut k), ZcStatus::Ok);
                k
            })
            .collect();
        assert_eq!(ks, vec![2, 2, 1]);
        let mut k = 0;
        assert_eq!(zc_result_receiver_k(r, 3, &mut k), ZcStatus::OutOfRange);
        assert!(last_error().contains("receiver index 3"));
        assert_eq!(zc_verify(g, r, ZcField::Auto, 7, 3), ZcStatus::Ok);
        zc_result_free(r);
        zc_graph_free(g);
    }
}

#[test]
fn explicit_arcs_and_json_round_trip() {
    // s=0 -> x=1 -> r1=2, x -> r2=3
    let tails = [0usize, 1, 1];
    let heads = [1usize, 2, 3];
    let receivers = [2usize, 3];
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(zc_graph_new(4, tails.as_ptr(), heads.as_ptr(), 3, &mut g), ZcStatus::Ok);
        let mut r = ptr::null_mut();
        assert_eq!(
            zc_construct(g, 0, receivers.as_ptr(), 2, ZcOrder::EdgeOrder, &mut r),
            ZcStatus::Ok
        );
        assert_eq!(zc_result_zone_count(r), 1);

        let mut json = ptr::null_mut();
        assert_eq!(zc_result_to_json(r, &mut json), ZcStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(zc_result_from_json(json, &mut back), ZcStatus::Ok);
        assert_eq!(zc_result_group_k(back), 1);
        assert_eq!(zc_verify(g, back, ZcField::Gf16, 1, 2), ZcStatus::Ok);
        zc_string_free(json);

        let mut gjson = ptr::null_mut();
        assert_eq!(zc_graph_to_json(g, &mut gjson), ZcStatus::Ok);
        let mut g2 = ptr::null_mut();
        assert_eq!(zc_graph_from_json(gjson, &mut g2), ZcStatus::Ok);
        assert_eq!(zc_graph_edge_count(g2), 3);
        zc_string_free(gjson);

        zc_result_free(back);
        zc_result_free(r);
        zc_graph_free(g2);
        zc_graph_free(g);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        let tails = [0usize];
        let heads = [5usize];
        assert_eq!(zc_graph_new(2, tails.as_ptr(), heads.as_ptr(), 1, &mut g), ZcStatus::InvalidGraph);
        assert!(g.is_null());
        assert_eq!(zc_graph_new(2, ptr::null(), ptr::null(), 1, &mut g), ZcStatus::NullPointer);

        let bad = CString::new("{not json").unwrap();
        assert_eq!(zc_graph_from_json(bad.as_ptr(), &mut g), ZcStatus::Parse);
        let unknown = CString::new("fig9").unwrap();
        assert_eq!(zc_graph_fixture(unknown.as_ptr(), &mut g), ZcStatus::OutOfRange);
        assert!(last_error().contains("fig9"));

        let g = fixture("fig1");
        let mut r = ptr::null_mut();
        let receivers = [0usize];
        assert_eq!(
            zc_construct(g, 0, receivers.as_ptr(), 1, ZcOrder::EdgeOrder, &mut r),
            ZcStatus::InvalidSession
        );
        assert_eq!(zc_construct(g, 0, ptr::null(), 0, ZcOrder::EdgeOrder, &mut r), ZcStatus::InvalidSession);

        // Node 2 is unreachable, so K = 0.
        let tails = [0usize];
        let heads = [1usize];
        let mut lonely = ptr::null_mut();
        assert_eq!(zc_graph_new(3, tails.as_ptr(), heads.as_ptr(), 1, &mut lonely), ZcStatus::Ok);
        let rs = [2usize];
        assert_eq!(zc_construct(lonely, 0, rs.as_ptr(), 1, ZcOrder::EdgeOrder, &mut r), ZcStatus::Ok);
        assert_eq!(zc_result_group_k(r), 0);
        assert_eq!(zc_verify(lonely, r, ZcField::Auto, 1, 1), ZcStatus::NoFeasibleCode);
        assert_eq!(zc_verify(g, r, ZcField::Auto, 1, 1), ZcStatus::InvalidGraph);
        zc_result_free(r);
        zc_graph_free(lonely);
        zc_graph_free(g);

        assert_eq!(zc_graph_node_count(ptr::null()), 0);
        assert_eq!(zc_result_group_k(ptr::null()), 0);
        zc_graph_free(ptr::null_mut());
        zc_result_free(ptr::null_mut());
        zc_string_free(ptr::null_mut());
        let name = CStr::from_ptr(zc_status_name(ZcStatus::NoFeasibleCode));
        assert_eq!(name.to_str().unwrap(), "no feasible code");
        assert!(!CStr::from_ptr(zc_version()).to_bytes().is_empty());
    }
}
