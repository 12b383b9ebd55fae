//! Any table the CSV reader accepts must survive a re-render → re-parse
//! cycle: same shape, bitwise-equal finite cells, kind-preserved otherwise.

#![no_main]

use libfuzzer_sys::fuzz_target;

use interbank::csv_io::{float_cell, parse_csv, render_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(parsed) = parse_csv(text) else { return };

    let header: Vec<&str> = parsed.header.iter().map(|s| s.as_str()).collect();
    let rows: Vec<Vec<String>> = parsed
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|cell| match cell {
                    Some(v) if v.is_finite() => float_cell(*v),
                    Some(v) => v.to_string(),
                    None => String::new(),
                })
                .collect()
        })
        .collect();
    let rendered = render_csv(&header, &rows);
    let reparsed = parse_csv(&rendered).expect("re-rendered table must stay parseable");

    assert_eq!(reparsed.header, parsed.header);
    assert_eq!(reparsed.rows.len(), parsed.rows.len());
    for (got, want) in reparsed.rows.iter().zip(&parsed.rows) {
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(want) {
            match (g, w) {
                (None, None) => {}
                (Some(g), Some(w)) if w.is_nan() => assert!(g.is_nan()),
                (Some(g), Some(w)) => assert_eq!(g.to_bits(), w.to_bits()),
                _ => panic!("cell presence changed in round trip"),
            }
        }
    }
});
