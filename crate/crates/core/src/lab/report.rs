use std::fmt::Write;

pub const CSV_HEADER: &str = "suite,trial,dim,norm,quantity,lhs,rhs,margin,pass";

/// Formats with 17 significant digits, `.` as decimal separator, and
/// scientific notation only outside `[1e-5, 1e17)`.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') { s.trim_end_matches('0').trim_end_matches('.').to_string() } else { s };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.16e}");
        let (mant, e) = s.split_once('e').expect("exponent");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

/// One check. `margin` is positive when the check is satisfied with room
/// to spare; diagnostic rows are printed but never counted.
#[derive(Clone, Debug)]
pub struct Row {
    pub trial: usize,
    pub norm: String,
    pub quantity: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub diagnostic: bool,
}

impl Row {
    /// Check `lhs ≤ rhs` up to `tol`.
    pub fn le(trial: usize, norm: &str, quantity: &str, lhs: f64, rhs: f64, tol: f64) -> Row {
        let margin = rhs - lhs;
        Row::new(trial, norm, quantity, lhs, rhs, margin, margin >= -tol)
    }

    /// Check `lhs ≥ rhs` up to `tol`.
    pub fn ge(trial: usize, norm: &str, quantity: &str, lhs: f64, rhs: f64, tol: f64) -> Row {
        let margin = lhs - rhs;
        Row::new(trial, norm, quantity, lhs, rhs, margin, margin >= -tol)
    }

    /// Check `lhs = rhs` up to `tol`.
    pub fn eq(trial: usize, norm: &str, quantity: &str, lhs: f64, rhs: f64, tol: f64) -> Row {
        let margin = -(lhs - rhs).abs();
        Row::new(trial, norm, quantity, lhs, rhs, margin, margin >= -tol)
    }

    /// Check `lhs > rhs` strictly.
    pub fn gt(trial: usize, norm: &str, quantity: &str, lhs: f64, rhs: f64) -> Row {
        Row::new(trial, norm, quantity, lhs, rhs, lhs - rhs, lhs > rhs)
    }

    pub fn new(trial: usize, norm: &str, quantity: &str, lhs: f64, rhs: f64, margin: f64, pass: bool) -> Row {
        Row {
            trial,
            norm: norm.to_string(),
            quantity: quantity.to_string(),
            lhs,
            rhs,
            margin,
            pass: pass && !margin.is_nan(),
            diagnostic: false,
        }
    }

    pub fn diagnostic(mut self) -> Row {
        self.diagnostic = true;
        self
    }
}

/// Rows of one suite run plus its verdict.
#[derive(Clone, Debug)]
pub struct Report {
    pub suite: String,
    pub dim: usize,
    pub rows: Vec<Row>,
    pub passed: usize,
    pub total: usize,
    pub ok: bool,
}

impl Report {
    pub(crate) fn new(suite: &str, dim: usize, rows: Vec<Row>, ok: impl FnOnce(usize, usize) -> bool) -> Report {
        let counted = rows.iter().filter(|r| !r.diagnostic);
        let total = counted.clone().count();
        let passed = counted.filter(|r| r.pass).count();
        Report { suite: suite.to_string(), dim, ok: ok(passed, total), rows, passed, total }
    }

    /// Counted rows that failed.
    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| !r.diagnostic && !r.pass)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.rows.len() + 2));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let pass = if r.diagnostic { "-" } else if r.pass { "true" } else { "false" };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                self.suite,
                r.trial,
                self.dim,
                r.norm.replace(',', ";"),
                r.quantity.replace(',', ";"),
                format_real(r.lhs),
                format_real(r.rhs),
                format_real(r.margin),
                pass
            );
        }
        let _ = writeln!(
            out,
            "{},summary,{},-,passed/total,{},{},{},{}",
            self.suite,
            self.dim,
            self.passed,
            self.total,
            self.passed as i64 - self.total as i64,
            self.ok
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_real(std::f64::consts::PI), "3.1415926535897931");
        assert_eq!(format_real(0.1), "0.10000000000000001");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(-2.5), "-2.5");
        assert_eq!(format_real(1e-9), "1.0000000000000001e-9");
        assert_eq!(format_real(123456.0), "123456");
        for x in [std::f64::consts::E, 1e-300, -7.25e20, 0.3333, 6.02e-6] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_report_has_header_and_summary() {
        let r = Report::new("triangle", 4, vec![], |p, t| p == t);
        assert_eq!(r.to_csv(), format!("{CSV_HEADER}\ntriangle,summary,4,-,passed/total,0,0,0,true\n"));
    }

    #[test]
    fn diagnostics_are_not_counted() {
        let rows = vec![Row::le(0, "-", "x", 1.0, 2.0, 0.0), Row::le(0, "-", "y", 3.0, 2.0, 0.0).diagnostic()];
        let r = Report::new("s", 2, rows, |p, t| p == t);
        assert_eq!((r.passed, r.total, r.ok), (1, 1, true));
        assert!(r.to_csv().contains(",-\n"));
    }
}
