//! The run report: one plain-text document of `key: value` lines with
//! stable field names, written to stdout. Timing goes to stderr so equal
//! seeds produce byte-identical documents.

use fairdiv::{Dataset, Solution};

pub struct Report {
    lines: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self { lines: vec![("command".into(), command.into())] }
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.into(), value.to_string()));
    }

    pub fn push_solution(&mut self, ds: &Dataset, sol: &Solution) {
        // The diversity field must agree with a recomputation from the ids.
        let recomputed = fairdiv::diversity(ds, &sol.selected);
        assert!(
            recomputed == sol.diversity || (recomputed.is_infinite() && sol.diversity.is_infinite()),
            "report diversity {} disagrees with recomputation {}",
            sol.diversity,
            recomputed
        );
        let ids: Vec<&str> = sol.selected.iter().map(|&i| ds.point(i).id.as_str()).collect();
        self.push("algorithm", &sol.algorithm_tag);
        self.push("selected", ids.join(","));
        self.push("diversity", fmt_f64(sol.diversity));
        let counts: Vec<String> = sol.group_counts.iter().map(usize::to_string).collect();
        self.push("group_counts", counts.join(","));
        match sol.gamma_used {
            Some(g) => self.push("gamma_used", fmt_f64(g)),
            None => self.push("gamma_used", "none"),
        }
        self.push("trials", sol.trials);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.lines {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

pub fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v}")
    }
}
