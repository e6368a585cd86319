use std::ffi::{CStr, CString};
use std::ptr;

use mislab_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { mislab_string_free(p) };
    s
}

fn last_error() -> String {
    let p = mislab_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn graph_round_trip() {
    let text = CString::new("4 2\n0 1\n2 3\n").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(mislab_graph_parse(text.as_ptr(), &mut g), MislabStatus::Ok);
        assert_eq!(mislab_graph_vertex_count(g), 4);
        assert_eq!(mislab_graph_edge_count(g), 2);
        assert_eq!(mislab_graph_max_degree(g), 1);
        assert!(mislab_graph_has_edge(g, 1, 0));
        assert!(!mislab_graph_has_edge(g, 0, 2));
        assert!(!mislab_graph_has_edge(g, 0, 99));

        let mut out = ptr::null_mut();
        assert_eq!(mislab_graph_to_text(g, &mut out), MislabStatus::Ok);
        let again = CString::new(take_string(out)).unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(mislab_graph_parse(again.as_ptr(), &mut h), MislabStatus::Ok);
        assert!(mislab_graph_equal(g, h));
        mislab_graph_free(g);
        mislab_graph_free(h);
    }
}

#[test]
fn parse_errors_set_message() {
    let text = CString::new("3 1\n0 7\n").unwrap();
    let mut g = ptr::null_mut();
    let st = unsafe { mislab_graph_parse(text.as_ptr(), &mut g) };
    assert_eq!(st, MislabStatus::ParseError);
    assert!(g.is_null());
    assert!(!last_error().is_empty());

    let st = unsafe { mislab_graph_parse(ptr::null(), &mut g) };
    assert_eq!(st, MislabStatus::NullPointer);
}

#[test]
fn success_clears_error() {
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(mislab_graph_parse(ptr::null(), &mut g), MislabStatus::NullPointer);
        assert_eq!(mislab_graph_generate(10, 2, 0.5, 1, &mut g), MislabStatus::Ok);
        assert!(mislab_last_error_message().is_null());
        mislab_graph_free(g);
    }
}

#[test]
fn cff_scheme_reconstructs_exactly() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(mislab_graph_generate(16, 2, 0.6, 11, &mut g), MislabStatus::Ok);
        assert!(mislab_graph_max_degree(g) <= 2);

        let mut s = ptr::null_mut();
        let mut verified = false;
        assert_eq!(mislab_scheme_cff(16, 2, 2.0, 5, &mut s, &mut verified), MislabStatus::Ok);
        assert!(verified);
        assert!(mislab_scheme_query_count(s) > 0);

        for (policy, seed) in [(MislabPolicy::GreedyLex, 0), (MislabPolicy::GreedyReverse, 0), (MislabPolicy::Random, 9)] {
            let mut t = ptr::null_mut();
            assert_eq!(mislab_run_scheme(g, s, policy, seed, &mut t), MislabStatus::Ok);
            assert_eq!(mislab_transcript_len(t), mislab_scheme_query_count(s));

            let mut d = ptr::null_mut();
            let mut unknown = usize::MAX;
            assert_eq!(mislab_decode(t, &mut d, &mut unknown), MislabStatus::Ok);
            assert_eq!(unknown, 0);
            assert!(mislab_graph_equal(g, d));
            mislab_graph_free(d);
            mislab_transcript_free(t);
        }
        mislab_scheme_free(s);
        mislab_graph_free(g);
    }
}

#[test]
fn transcript_jsonl_round_trip() {
    unsafe {
        let mut g = ptr::null_mut();
        mislab_graph_generate(12, 2, 0.5, 3, &mut g);
        let mut s = ptr::null_mut();
        assert_eq!(mislab_scheme_randomized(12, 2, 2.0, 1.0 / 3.0, 4, &mut s), MislabStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(mislab_run_scheme(g, s, MislabPolicy::Random, 1, &mut t), MislabStatus::Ok);

        let mut text = ptr::null_mut();
        assert_eq!(mislab_transcript_to_jsonl(t, &mut text), MislabStatus::Ok);
        let text = CString::new(take_string(text)).unwrap();
        let mut u = ptr::null_mut();
        assert_eq!(mislab_transcript_parse_jsonl(text.as_ptr(), &mut u), MislabStatus::Ok);
        assert_eq!(mislab_transcript_len(u), mislab_transcript_len(t));

        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        let (mut ua, mut ub) = (0, 0);
        mislab_decode(t, &mut a, &mut ua);
        mislab_decode(u, &mut b, &mut ub);
        assert_eq!(ua, ub);
        assert!(mislab_graph_equal(a, b));
        for p in [a, b, g] {
            mislab_graph_free(p);
        }
        mislab_transcript_free(t);
        mislab_transcript_free(u);
        mislab_scheme_free(s);
    }
}

#[test]
fn corrupted_transcript_rejected() {
    let text = CString::new("{\"q\":[0,1],\"a\":[0,1]\n").unwrap();
    let mut t = ptr::null_mut();
    let st = unsafe { mislab_transcript_parse_jsonl(text.as_ptr(), &mut t) };
    assert_ne!(st, MislabStatus::Ok);
    assert!(t.is_null());
}

#[test]
fn mismatched_universe_rejected() {
    unsafe {
        let mut g = ptr::null_mut();
        mislab_graph_generate(10, 2, 0.5, 1, &mut g);
        let mut s = ptr::null_mut();
        mislab_scheme_randomized(12, 2, 1.0, 0.3, 1, &mut s);
        let mut t = ptr::null_mut();
        assert_eq!(mislab_run_scheme(g, s, MislabPolicy::GreedyLex, 0, &mut t), MislabStatus::InvalidArgument);
        assert!(t.is_null());
        mislab_scheme_free(s);
        mislab_graph_free(g);
    }
}

#[test]
fn experiment_json() {
    let req = CString::new(r#"{"experiment":"family-count","n":9,"delta":2}"#).unwrap();
    let mut report = ptr::null_mut();
    let mut passed = false;
    let st = unsafe { mislab_experiment_json(req.as_ptr(), &mut report, &mut passed) };
    assert_eq!(st, MislabStatus::Ok, "{}", last_error());
    assert!(passed);
    let v: serde_json::Value = serde_json::from_str(&take_string(report)).unwrap();
    assert_eq!(v["measured"]["exact"], serde_json::json!("28"));

    let bad = CString::new(r#"{"experiment":"family-count","n":9}"#).unwrap();
    let st = unsafe { mislab_experiment_json(bad.as_ptr(), &mut report, ptr::null_mut()) };
    assert_eq!(st, MislabStatus::ParseError);
}

#[test]
fn null_handles_are_harmless() {
    unsafe {
        assert_eq!(mislab_graph_vertex_count(ptr::null()), 0);
        assert_eq!(mislab_scheme_query_count(ptr::null()), 0);
        assert_eq!(mislab_transcript_len(ptr::null()), 0);
        mislab_graph_free(ptr::null_mut());
        mislab_scheme_free(ptr::null_mut());
        mislab_transcript_free(ptr::null_mut());
        mislab_string_free(ptr::null_mut());
        let mut out = ptr::null_mut();
        assert_eq!(mislab_graph_to_text(ptr::null(), &mut out), MislabStatus::NullPointer);
    }
}

#[test]
fn version_matches_package() {
    let v = unsafe { CStr::from_ptr(mislab_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
