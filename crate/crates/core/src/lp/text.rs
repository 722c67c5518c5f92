use super::{LpModel, Relation};
use std::fmt::Write;

fn term(out: &mut String, coeff: f64, var: usize) {
    let sign = if coeff < 0.0 { '-' } else { '+' };
    let _ = write!(out, " {sign} {} x{var}", coeff.abs());
}

pub(super) fn write_lp(model: &LpModel) -> String {
    let mut out = String::new();
    out.push_str("minimize\n  obj:");
    let mut any = false;
    for (j, &c) in model.objective.iter().enumerate() {
        if c != 0.0 {
            term(&mut out, c, j);
            any = true;
        }
    }
    if !any {
        out.push_str(" 0");
    }
    out.push_str("\nsubject to\n");
    for (i, row) in model.rows.iter().enumerate() {
        let _ = write!(out, "  r{i}:");
        if row.coeffs.is_empty() {
            out.push_str(" 0");
        }
        for &(j, a) in &row.coeffs {
            term(&mut out, a, j);
        }
        let op = match row.relation {
            Relation::Ge => ">=",
            Relation::Le => "<=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " {op} {}", row.rhs);
    }
    out.push_str("bounds\n");
    for (j, &(lo, hi)) in model.bounds.iter().enumerate() {
        if hi.is_finite() {
            let _ = writeln!(out, "  {lo} <= x{j} <= {hi}");
        } else {
            let _ = writeln!(out, "  x{j} >= {lo}");
        }
    }
    out.push_str("end\n");
    out
}

#[cfg(test)]
mod tests {
    use crate::lp::{LpModel, Row};

    #[test]
    fn one_row_per_line() {
        let mut m = LpModel::new();
        let x = m.add_var(1.0);
        let y = m.add_bounded_var(-2.5, 0.0, f64::INFINITY);
        m.add_row(Row::ge(vec![(x, 1.0), (y, -1.0)], 0.5));
        m.add_row(Row::eq(vec![(y, 3.0)], 1.0));
        let text = m.to_lp_text();
        let expected = "minimize\n  obj: + 1 x0 - 2.5 x1\nsubject to\n  r0: + 1 x0 - 1 x1 >= 0.5\n  r1: + 3 x1 = 1\nbounds\n  0 <= x0 <= 1\n  x1 >= 0\nend\n";
        assert_eq!(text, expected);
    }
}
