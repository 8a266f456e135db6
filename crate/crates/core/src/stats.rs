//! Index histograms against the Poisson(1/2) prediction.
//!
//! Indices are binned as `r = 0, 1, 2, ≥3`, giving a chi-squared statistic
//! with 3 degrees of freedom. The reported significance is the upper-tail
//! probability of that statistic.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::irregularity::ScanRow;

pub const DEGREES_OF_FREEDOM: u32 = 3;

/// `(1/2)^r e^{−1/2} / r!`.
pub fn predicted_pmf(r: u64) -> f64 {
    let mut term = (-0.5f64).exp();
    for k in 1..=r {
        term *= 0.5 / k as f64;
    }
    term
}

/// How scan rows are split before counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Grouping {
    Pooled,
    Prime,
    Disc,
}

impl std::str::FromStr for Grouping {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pooled" => Ok(Grouping::Pooled),
            "prime" => Ok(Grouping::Prime),
            "disc" => Ok(Grouping::Disc),
            _ => domain(format!("unknown grouping {s:?} (pooled, prime, disc)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupKey {
    All,
    Prime(u64),
    Disc(u64),
}

impl fmt::Display for GroupKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKey::All => f.write_str("all"),
            GroupKey::Prime(p) => write!(f, "p={p}"),
            GroupKey::Disc(d) => write!(f, "D={d}"),
        }
    }
}

/// Counts of index values `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexHistogram {
    pub group: GroupKey,
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl IndexHistogram {
    /// From counts listed by `r = 0, 1, 2, …`.
    pub fn from_counts(counts: &[u64]) -> Self {
        let counts: BTreeMap<u64, u64> = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(r, &c)| (r as u64, c))
            .collect();
        let total = counts.values().sum();
        IndexHistogram { group: GroupKey::All, counts, total }
    }

    pub fn count(&self, r: u64) -> u64 {
        self.counts.get(&r).copied().unwrap_or(0)
    }

    pub fn max_r(&self) -> u64 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    /// Counts as a dense vector indexed by `r`.
    pub fn dense(&self) -> Vec<u64> {
        (0..=self.max_r()).map(|r| self.count(r)).collect()
    }

    /// Writes `r,count,predicted_count,predicted_fraction`.
    pub fn write_csv<W: Write>(&self, mut w: W, with_header: bool) -> std::io::Result<()> {
        if with_header {
            writeln!(w, "r,count,predicted_count,predicted_fraction")?;
        }
        for r in 0..=self.max_r() {
            let pmf = predicted_pmf(r);
            writeln!(
                w,
                "{},{},{},{}",
                r,
                self.count(r),
                format_sig(self.total as f64 * pmf),
                format_sig(pmf)
            )?;
        }
        Ok(())
    }
}

/// Counts rows by `r` under the requested grouping, groups in ascending key order.
pub fn histogram(rows: &[ScanRow], grouping: Grouping) -> Result<Vec<IndexHistogram>> {
    if rows.is_empty() {
        return domain("cannot build a histogram from no rows");
    }
    let mut groups: BTreeMap<GroupKey, BTreeMap<u64, u64>> = BTreeMap::new();
    for row in rows {
        let key = match grouping {
            Grouping::Pooled => GroupKey::All,
            Grouping::Prime => GroupKey::Prime(row.p),
            Grouping::Disc => GroupKey::Disc(row.d),
        };
        *groups.entry(key).or_default().entry(row.r).or_default() += 1;
    }
    Ok(groups
        .into_iter()
        .map(|(group, counts)| {
            let total = counts.values().sum();
            IndexHistogram { group, counts, total }
        })
        .collect())
}

/// Writes one CSV for several histograms. A single pooled histogram keeps the
/// plain `r,count,…` layout; otherwise a leading `group` column is added.
pub fn write_histograms_csv<W: Write>(hists: &[IndexHistogram], mut w: W) -> std::io::Result<()> {
    if let [h] = hists {
        if h.group == GroupKey::All {
            return h.write_csv(w, true);
        }
    }
    writeln!(w, "group,r,count,predicted_count,predicted_fraction")?;
    for h in hists {
        let mut buf = Vec::new();
        h.write_csv(&mut buf, false)?;
        for line in String::from_utf8_lossy(&buf).lines() {
            writeln!(w, "{},{line}", h.group)?;
        }
    }
    Ok(())
}

/// `u_r`: the fraction of the histogram with index `r`.
pub fn u_fraction(hist: &IndexHistogram, r: u64) -> f64 {
    if hist.total == 0 {
        return 0.0;
    }
    hist.count(r) as f64 / hist.total as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bin {
    pub label: &'static str,
    pub observed: u64,
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChiSquaredReport {
    pub group: GroupKey,
    pub statistic: f64,
    pub df: u32,
    pub significance: f64,
    pub bins: [Bin; 4],
}

/// Bins `0, 1, 2, ≥3` and their expected counts for `total` samples.
pub fn expected_bins(total: u64) -> [f64; 4] {
    let t = total as f64;
    let p: Vec<f64> = (0..3).map(predicted_pmf).collect();
    [t * p[0], t * p[1], t * p[2], t * (1.0 - p[0] - p[1] - p[2])]
}

pub fn chi_squared(hist: &IndexHistogram) -> Result<ChiSquaredReport> {
    if hist.total == 0 {
        return domain("chi-squared needs at least one observation");
    }
    let observed = [
        hist.count(0),
        hist.count(1),
        hist.count(2),
        hist.counts.range(3..).map(|(_, c)| c).sum(),
    ];
    let expected = expected_bins(hist.total);
    let labels = ["0", "1", "2", ">=3"];
    let bins: [Bin; 4] = std::array::from_fn(|i| Bin {
        label: labels[i],
        observed: observed[i],
        expected: expected[i],
    });
    let statistic = bins
        .iter()
        .map(|b| {
            let diff = b.observed as f64 - b.expected;
            diff * diff / b.expected
        })
        .sum();
    Ok(ChiSquaredReport {
        group: hist.group,
        statistic,
        df: DEGREES_OF_FREEDOM,
        significance: significance(statistic, DEGREES_OF_FREEDOM),
        bins,
    })
}

/// Upper-tail probability `Q(df/2, x/2)` of the chi-squared distribution.
pub fn significance(statistic: f64, df: u32) -> f64 {
    assert!(df >= 1, "degrees of freedom must be positive");
    if statistic <= 0.0 {
        return 1.0;
    }
    gamma_q(df as f64 / 2.0, statistic / 2.0)
}

/// Lower-tail probability `P(df/2, x/2)`.
pub fn lower_tail(statistic: f64, df: u32) -> f64 {
    if statistic <= 0.0 {
        return 0.0;
    }
    gamma_p(df as f64 / 2.0, statistic / 2.0)
}

const EPS: f64 = 1e-15;
const MAX_ITER: usize = 10_000;

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + G + 0.5;
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_series(a, x)
    } else {
        1.0 - gamma_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_series(a, x)
    } else {
        gamma_continued_fraction(a, x)
    }
}

fn gamma_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

// modified Lentz
fn gamma_continued_fraction(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Formats with six significant digits, locale-independent.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // exponent after rounding to six digits
    let sci = format!("{x:.5e}");
    let exp: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// `x` rounded to six significant digits.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

#[derive(Serialize, Deserialize)]
struct BinJson {
    r: String,
    obs: u64,
    exp: f64,
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    group: Option<String>,
    chi2: f64,
    df: u32,
    significance: f64,
    bins: Vec<BinJson>,
}

impl ChiSquaredReport {
    fn to_json_struct(&self, with_group: bool) -> ReportJson {
        ReportJson {
            group: with_group.then(|| self.group.to_string()),
            chi2: round_sig(self.statistic),
            df: self.df,
            significance: round_sig(self.significance),
            bins: self
                .bins
                .iter()
                .map(|b| BinJson { r: b.label.to_string(), obs: b.observed, exp: round_sig(b.expected) })
                .collect(),
        }
    }

    /// `{"chi2":…,"df":3,"significance":…,"bins":[{"r":"0","obs":…,"exp":…},…]}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_struct(false)).expect("report serializes")
    }
}

/// A JSON array of reports, each tagged with its group.
pub fn reports_to_json(reports: &[ChiSquaredReport]) -> String {
    let v: Vec<ReportJson> = reports.iter().map(|r| r.to_json_struct(true)).collect();
    serde_json::to_string(&v).expect("reports serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pmf_values() {
        assert!((predicted_pmf(0) - 0.606531).abs() < 5e-7);
        assert!((predicted_pmf(1) - 0.303265).abs() < 5e-7);
        assert!((predicted_pmf(2) - 0.075816).abs() < 5e-7);
        assert!((predicted_pmf(3) - 0.012636).abs() < 5e-7);
        assert!((predicted_pmf(4) - 0.001580).abs() < 5e-7);
        let total: f64 = (0..40).map(predicted_pmf).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn significance_endpoints_and_monotonicity() {
        assert_eq!(significance(0.0, 3), 1.0);
        let mut prev = 1.0;
        for i in 1..400 {
            let x = i as f64 * 0.1;
            let s = significance(x, 3);
            assert!(s < prev && (0.0..=1.0).contains(&s), "x = {x}");
            assert!((s + lower_tail(x, 3) - 1.0).abs() < 1e-6);
            prev = s;
        }
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
        assert!((ln_gamma(10.0) - 362_880f64.ln()).abs() < 1e-11);
        assert!((ln_gamma(1.5) - (0.5 * std::f64::consts::PI.sqrt()).ln()).abs() < 1e-13);
    }

    #[test]
    fn exact_fit_has_zero_statistic() {
        let h = IndexHistogram { group: GroupKey::All, counts: BTreeMap::new(), total: 0 };
        assert!(chi_squared(&h).is_err());
        // a histogram whose observed counts are the expected ones (scaled) gives ~0
        let expected = expected_bins(1_000_000);
        let counts: Vec<u64> = expected.iter().map(|e| e.round() as u64).collect();
        let mut h = IndexHistogram::from_counts(&counts);
        h.total = counts.iter().sum();
        assert!(chi_squared(&h).unwrap().statistic < 1e-3);
    }

    #[test]
    fn grouping() {
        let rows = [
            ScanRow { d: 5, p: 3, r: 0 },
            ScanRow { d: 5, p: 7, r: 1 },
            ScanRow { d: 8, p: 3, r: 0 },
        ];
        let pooled = histogram(&rows, Grouping::Pooled).unwrap();
        assert_eq!(pooled.len(), 1);
        assert_eq!(pooled[0].dense(), vec![2, 1]);
        let by_p = histogram(&rows, Grouping::Prime).unwrap();
        assert_eq!(by_p[0].group, GroupKey::Prime(3));
        assert_eq!(by_p[0].total, 2);
        let by_d = histogram(&rows, Grouping::Disc).unwrap();
        assert_eq!(by_d[1].group, GroupKey::Disc(8));
        assert!(histogram(&[], Grouping::Pooled).is_err());
        let single = histogram(&rows[2..], Grouping::Pooled).unwrap();
        assert_eq!(single[0].dense(), vec![1]);
    }

    #[test]
    fn u_fractions() {
        let h = IndexHistogram::from_counts(&[422, 186, 51, 7, 2]);
        assert!((u_fraction(&h, 0) - 422.0 / 668.0).abs() < 1e-15);
        assert_eq!(u_fraction(&h, 9), 0.0);
    }

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.552034123), "0.552034");
        assert_eq!(format_sig(405.16108), "405.161");
        assert_eq!(format_sig(81.1), "81.1000");
        assert_eq!(format_sig(9.9999996), "10.0000");
        assert_eq!(format_sig(123456789.0), "123456789");
        assert_eq!(format_sig(-0.0012345678), "-0.00123457");
        assert_eq!(format_sig(0.0), "0");
    }

    #[test]
    fn json_shape() {
        let h = IndexHistogram::from_counts(&[422, 186, 51, 7, 2]);
        let json = chi_squared(&h).unwrap().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["df"], 3);
        assert_eq!(v["bins"].as_array().unwrap().len(), 4);
        assert_eq!(v["bins"][3]["r"], ">=3");
        assert_eq!(v["bins"][3]["obs"], 9);
        assert!(json.starts_with("{\"chi2\":"));
    }

    #[test]
    fn histogram_csv() {
        let h = IndexHistogram::from_counts(&[422, 186, 51, 7, 2]);
        let mut buf = Vec::new();
        h.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "r,count,predicted_count,predicted_fraction");
        assert_eq!(lines[1], "0,422,405.162,0.606531");
        assert_eq!(lines.len(), 6);
    }
}
