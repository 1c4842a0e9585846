//! Line-oriented `key=value` reports with a fixed key order.

use std::fmt::Write as _;

/// Per-operation access counts for one operation kind.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostStats {
    samples: Vec<u64>,
    total: u64,
    max: u64,
}

impl CostStats {
    pub fn record(&mut self, cost: u64) {
        self.samples.push(cost);
        self.total += cost;
        self.max = self.max.max(cost);
    }

    pub fn merge(&mut self, other: &CostStats) {
        self.samples.extend_from_slice(&other.samples);
        self.total += other.total;
        self.max = self.max.max(other.max);
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn max(&self) -> u64 {
        self.max
    }

    pub fn mean(&self) -> f64 {
        if self.samples.is_empty() {
            0.0
        } else {
            self.total as f64 / self.samples.len() as f64
        }
    }

    /// Nearest-rank percentile, `q` in `[0, 100]`.
    pub fn percentile(&self, q: f64) -> u64 {
        if self.samples.is_empty() {
            return 0;
        }
        let mut sorted = self.samples.clone();
        sorted.sort_unstable();
        let rank = ((q / 100.0) * sorted.len() as f64).ceil() as usize;
        sorted[rank.clamp(1, sorted.len()) - 1]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub backend: String,
    pub n: usize,
    pub w: u32,
    pub seqs: usize,
    pub reads: CostStats,
    pub writes: CostStats,
    pub fills: CostStats,
    /// Remaining-block count at each linear-time conversion.
    pub conversions: Vec<usize>,
    pub mismatches: u64,
    /// Trace lines whose expected read value did not match.
    pub expectation_failures: Vec<usize>,
    /// Latency per op kind in nanoseconds; only filled by `bench`.
    pub latency_ns: Option<[CostStats; 3]>,
    pub wall_ms: Option<f64>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.expectation_failures.is_empty()
    }

    pub fn total_accesses(&self) -> u64 {
        self.reads.total() + self.writes.total() + self.fills.total()
    }

    pub fn ops(&self) -> usize {
        self.reads.count() + self.writes.count() + self.fills.count()
    }

    pub fn conversions_above(&self, k: usize) -> usize {
        self.conversions.iter().filter(|&&c| c > k).count()
    }

    pub fn merge(&mut self, other: &RunReport) {
        self.reads.merge(&other.reads);
        self.writes.merge(&other.writes);
        self.fills.merge(&other.fills);
        self.conversions.extend_from_slice(&other.conversions);
        self.mismatches += other.mismatches;
        self.expectation_failures
            .extend_from_slice(&other.expectation_failures);
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("command", &self.command);
        kv("backend", &self.backend);
        kv("n", &self.n);
        kv("w", &self.w);
        kv("seqs", &self.seqs);
        kv("ops", &self.ops());
        for (name, st) in [("read", &self.reads), ("write", &self.writes), ("fill", &self.fills)] {
            kv(&format!("{name}s"), &st.count());
            kv(&format!("{name}_cost_mean"), &format!("{:.3}", st.mean()));
            kv(&format!("{name}_cost_p50"), &st.percentile(50.0));
            kv(&format!("{name}_cost_p99"), &st.percentile(99.0));
            kv(&format!("{name}_cost_max"), &st.max());
        }
        kv("total_accesses", &self.total_accesses());
        kv("conversions", &self.conversions.len());
        kv("conversions_k_gt_100", &self.conversions_above(100));
        kv("conversion_k_max", &self.conversions.iter().max().unwrap_or(&0));
        kv("conversion_k", &run_lengths(&self.conversions));
        kv("mismatches", &self.mismatches);
        let lines: Vec<String> = self
            .expectation_failures
            .iter()
            .map(|l| l.to_string())
            .collect();
        kv("expectation_failures", &self.expectation_failures.len());
        kv(
            "expectation_failure_lines",
            &if lines.is_empty() { "-".to_string() } else { lines.join(",") },
        );
        if let Some(lat) = &self.latency_ns {
            for (name, st) in ["read", "write", "fill"].iter().zip(lat) {
                kv(&format!("{name}_ns_mean"), &format!("{:.1}", st.mean()));
                kv(&format!("{name}_ns_p50"), &st.percentile(50.0));
                kv(&format!("{name}_ns_p99"), &st.percentile(99.0));
                kv(&format!("{name}_ns_max"), &st.max());
            }
        }
        if let Some(ms) = self.wall_ms {
            kv("wall_ms", &format!("{ms:.1}"));
        }
        kv("result", &if self.passed() { "pass" } else { "fail" });
        s
    }
}

/// `a,b*3,c` style run-length list; `-` when empty.
fn run_lengths(ks: &[usize]) -> String {
    let mut parts = Vec::new();
    let mut rest = ks;
    while let Some(&k) = rest.first() {
        let run = rest.iter().take_while(|&&x| x == k).count();
        parts.push(if run == 1 { k.to_string() } else { format!("{k}*{run}") });
        rest = &rest[run..];
    }
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentiles() {
        let mut st = CostStats::default();
        for c in 1..=100 {
            st.record(c);
        }
        assert_eq!(st.percentile(50.0), 50);
        assert_eq!(st.percentile(99.0), 99);
        assert_eq!(st.percentile(100.0), 100);
        assert_eq!(st.max(), 100);
        assert!((st.mean() - 50.5).abs() < 1e-12);
        assert_eq!(CostStats::default().percentile(50.0), 0);
    }

    #[test]
    fn render_is_stable_key_value() {
        let mut r = RunReport {
            command: "fuzz".into(),
            backend: "amortized".into(),
            n: 400,
            w: 64,
            seqs: 1,
            ..Default::default()
        };
        r.reads.record(4);
        r.conversions = vec![8, 120, 120, 3];
        let text = r.render();
        assert!(text.lines().all(|l| l.split_once('=').is_some()));
        assert!(text.contains("conversion_k=8,120*2,3\n"));
        assert!(text.contains("conversions_k_gt_100=2\n"));
        assert!(text.ends_with("result=pass\n"));
        assert_eq!(text, r.clone().render());
        r.mismatches = 1;
        assert!(r.render().ends_with("result=fail\n"));
    }
}
