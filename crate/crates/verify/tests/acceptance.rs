// SPDX-License-Identifier: MIT OR Apache-2.0

//! Runs every acceptance criterion and prints one line per criterion.
//! Exits nonzero when any criterion fails.

fn main() {
    let reports: Vec<_> = agehopf_verify::criteria()
        .iter()
        .map(|c| {
            let r = c.run();
            println!("{r}");
            r
        })
        .collect();
    let failed: Vec<u32> = reports.iter().filter(|r| !r.pass).map(|r| r.id).collect();
    println!(
        "acceptance: {} of {} criteria pass{}",
        reports.len() - failed.len(),
        reports.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {failed:?}") }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
