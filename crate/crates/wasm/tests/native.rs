use lcqaoa_wasm::{landscape_grid, scaling_rows, solve_report};

#[test]
fn landscape_is_bounded_and_flat_at_origin() {
    let grid = landscape_grid(8, 3, 1, "original", 16).unwrap();
    assert_eq!(grid.len(), 256);
    assert!(grid.iter().all(|&x| (0.0..=1.0).contains(&x)));
    let baseline = grid[0];
    assert!(grid[1..16].iter().all(|&x| (x - baseline).abs() < 1e-12));
    assert!(grid.iter().any(|&x| x > baseline + 0.05));
}

#[test]
fn scaling_rows_have_linear_lc_counts() {
    let rows: serde_json::Value = serde_json::from_str(&scaling_rows(3, 6, 14, 0).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    for r in rows {
        let n = r["n"].as_u64().unwrap();
        assert_eq!(r["lc"]["two_qubit_count"].as_u64().unwrap(), r["chain_length"].as_u64().unwrap() - 1);
        assert!(r["original"]["two_qubit_count"].as_u64().unwrap() >= 3 * n / 2);
    }
}

#[test]
fn solve_report_json() {
    let r: serde_json::Value = serde_json::from_str(&solve_report(10, 3, 2, "lc", 2, 256).unwrap()).unwrap();
    assert_eq!(r["levels"].as_array().unwrap().len(), 2);
    let pre: u64 = r["histogram"]["pre"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(pre, 256);
    assert!(solve_report(10, 3, 2, "bogus", 1, 256).is_err());
}
