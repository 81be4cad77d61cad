use std::ffi::{CStr, CString};
use std::ptr;

use cyclesieve_ffi::*;

fn triangle() -> *mut CsGraph {
    let src = [0usize, 1, 2];
    let dst = [1usize, 2, 0];
    let mut g = ptr::null_mut();
    let status = unsafe {
        cs_graph_from_edges(3, false, src.as_ptr(), dst.as_ptr(), ptr::null(), 3, &mut g)
    };
    assert_eq!(status, CsStatus::Ok);
    g
}

fn values(c: *const CsCounts) -> Vec<i64> {
    let n = unsafe { cs_counts_len(c) };
    (1..=n)
        .map(|k| {
            let mut v = 0;
            assert_eq!(unsafe { cs_counts_get_i64(c, k, &mut v) }, CsStatus::Ok);
            v
        })
        .collect()
}

fn last_error() -> String {
    let p = cs_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn triangle_cycles_paths_and_roots() {
    let g = triangle();
    assert_eq!(unsafe { cs_graph_vertex_count(g) }, 3);
    assert_eq!(unsafe { cs_graph_edge_count(g) }, 3);

    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cs_count_cycles(g, 3, &mut c) }, CsStatus::Ok);
    assert!(unsafe { cs_counts_is_exact(c) });
    assert_eq!(values(c), vec![0, 3, 2]);
    unsafe { cs_counts_free(c) };

    let mut r = ptr::null_mut();
    assert_eq!(
        unsafe { cs_count_cycles_through(g, 0, 3, &mut r) },
        CsStatus::Ok
    );
    assert_eq!(values(r), vec![0, 2, 2]);
    unsafe { cs_counts_free(r) };

    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cs_count_paths(g, 0, 1, 2, &mut p) }, CsStatus::Ok);
    assert_eq!(values(p), vec![1, 1]);
    let s = unsafe { cs_counts_get_string(p, 2) };
    assert_eq!(unsafe { CStr::from_ptr(s) }.to_str().unwrap(), "1");
    unsafe {
        cs_string_free(s);
        cs_counts_free(p);
        cs_graph_free(g);
    }
}

#[test]
fn weighted_edges_give_weighted_sums() {
    let src = [0usize, 1];
    let dst = [1usize, 0];
    let w = [2.0, 3.0];
    let mut g = ptr::null_mut();
    let status =
        unsafe { cs_graph_from_edges(2, true, src.as_ptr(), dst.as_ptr(), w.as_ptr(), 2, &mut g) };
    assert_eq!(status, CsStatus::Ok);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cs_count_cycles(g, 2, &mut c) }, CsStatus::Ok);
    assert_eq!(values(c), vec![0, 6]);
    let mut x = 0.0;
    assert_eq!(unsafe { cs_counts_get_f64(c, 2, &mut x) }, CsStatus::Ok);
    assert_eq!(x, 6.0);
    unsafe {
        cs_counts_free(c);
        cs_graph_free(g);
    }
}

#[test]
fn errors_set_status_and_message() {
    let src = [0usize];
    let dst = [5usize];
    let mut g = ptr::null_mut();
    let status = unsafe {
        cs_graph_from_edges(3, false, src.as_ptr(), dst.as_ptr(), ptr::null(), 1, &mut g)
    };
    assert_eq!(status, CsStatus::InvalidArgument);
    assert!(g.is_null());
    assert!(last_error().contains("vertex range"));

    let g = triangle();
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { cs_count_cycles(g, 0, &mut c) },
        CsStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cs_count_paths(g, 1, 1, 2, &mut c) },
        CsStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cs_count_cycles_through(g, 9, 2, &mut c) },
        CsStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cs_count_cycles(ptr::null(), 3, &mut c) },
        CsStatus::NullArgument
    );
    assert_eq!(
        unsafe { cs_count_cycles(g, 3, ptr::null_mut()) },
        CsStatus::NullArgument
    );

    assert_eq!(unsafe { cs_count_cycles(g, 3, &mut c) }, CsStatus::Ok);
    let mut v = 0;
    assert_eq!(
        unsafe { cs_counts_get_i64(c, 0, &mut v) },
        CsStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cs_counts_get_i64(c, 4, &mut v) },
        CsStatus::InvalidArgument
    );
    assert!(unsafe { cs_counts_get_string(c, 9) }.is_null());
    unsafe {
        cs_counts_free(c);
        cs_graph_free(g);
        cs_graph_free(ptr::null_mut());
        cs_counts_free(ptr::null_mut());
        cs_string_free(ptr::null_mut());
    }
}

#[test]
fn large_counts_overflow_i64_but_not_strings() {
    let src = [0usize, 1];
    let dst = [1usize, 0];
    let w = [4294967296.0, 4294967296.0];
    let mut g = ptr::null_mut();
    let status =
        unsafe { cs_graph_from_edges(2, true, src.as_ptr(), dst.as_ptr(), w.as_ptr(), 2, &mut g) };
    assert_eq!(status, CsStatus::Ok);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cs_count_cycles(g, 2, &mut c) }, CsStatus::Ok);
    let mut v = 0;
    assert_eq!(
        unsafe { cs_counts_get_i64(c, 2, &mut v) },
        CsStatus::Overflow
    );
    assert!(last_error().contains("64 bits"));
    let s = unsafe { cs_counts_get_string(c, 2) };
    assert_eq!(
        unsafe { CStr::from_ptr(s) }.to_str().unwrap(),
        "18446744073709551616"
    );
    unsafe {
        cs_string_free(s);
        cs_counts_free(c);
        cs_graph_free(g);
    }
}

#[test]
fn load_reads_edge_lists_and_reports_missing_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "# square with a chord\n0 1 2\n1 2\n2 3\n3 0\n0 2\n").unwrap();
    let cpath = CString::new(path.to_str().unwrap()).unwrap();
    let mut g = ptr::null_mut();
    let status = unsafe { cs_graph_load(cpath.as_ptr(), CsFormat::EdgeList, false, false, &mut g) };
    assert_eq!(status, CsStatus::Ok);
    assert_eq!(unsafe { cs_graph_edge_count(g) }, 5);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cs_count_cycles(g, 4, &mut c) }, CsStatus::Ok);
    assert_eq!(values(c), vec![0, 5, 4, 2]);
    unsafe { cs_counts_free(c) };
    unsafe { cs_graph_free(g) };

    let mut w = ptr::null_mut();
    let status = unsafe { cs_graph_load(cpath.as_ptr(), CsFormat::EdgeList, false, true, &mut w) };
    assert_eq!(status, CsStatus::Ok);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cs_count_cycles(w, 2, &mut c) }, CsStatus::Ok);
    // the backtrack over the weight-2 edge contributes 2·2
    assert_eq!(values(c), vec![0, 8]);
    unsafe { cs_counts_free(c) };
    unsafe { cs_graph_free(w) };

    let missing = CString::new(dir.path().join("nope.txt").to_str().unwrap()).unwrap();
    let mut g = ptr::null_mut();
    let status =
        unsafe { cs_graph_load(missing.as_ptr(), CsFormat::EdgeList, false, false, &mut g) };
    assert_eq!(status, CsStatus::IoError);
    assert!(g.is_null());
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(cs_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
