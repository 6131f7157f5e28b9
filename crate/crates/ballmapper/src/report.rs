//! CSV report tables. Numbers use shortest round-trip formatting.

use ballmapper_core::analysis::{BallSummary, ColumnTest, ComparisonReport, SweepRow};
use ballmapper_core::pointcloud::AxisStats;
use ballmapper_core::regression::OlsFit;

use crate::error::{AppError, AppResult};

fn finish(w: csv::Writer<Vec<u8>>) -> AppResult<String> {
    let bytes = w.into_inner().map_err(|e| AppError::file("<csv>")(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is built from utf-8"))
}

fn num(v: f64) -> String {
    v.to_string()
}

/// `epsilon,balls,size_mean,size_sd,edges_per_ball`
pub fn sweep_csv(rows: &[SweepRow]) -> AppResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["epsilon", "balls", "size_mean", "size_sd", "edges_per_ball"])?;
    for r in rows {
        w.write_record([
            num(r.epsilon),
            r.ball_count.to_string(),
            num(r.size_mean),
            num(r.size_sd),
            num(r.edges_per_ball),
        ])?;
    }
    finish(w)
}

/// `axis,mean_a,mean_b,diff,std_diff`, one row per axis, then a `Size` row
/// carrying the distinct row counts of each group.
pub fn comparison_csv(report: &ComparisonReport) -> AppResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["axis", "mean_a", "mean_b", "diff", "std_diff"])?;
    for r in &report.rows {
        w.write_record([r.axis.clone(), num(r.mean_a), num(r.mean_b), num(r.diff), num(r.std_diff)])?;
    }
    w.write_record([
        "Size".into(),
        report.size_a.to_string(),
        report.size_b.to_string(),
        String::new(),
        String::new(),
    ])?;
    finish(w)
}

/// `column,mean_a,mean_b,diff,t,df,p,stars`
pub fn ttests_csv(tests: &[ColumnTest]) -> AppResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["column", "mean_a", "mean_b", "diff", "t", "df", "p", "stars"])?;
    for c in tests {
        let t = &c.test;
        w.write_record([
            c.column.clone(),
            num(t.mean_a),
            num(t.mean_b),
            num(t.diff),
            num(t.t),
            num(t.df),
            num(t.p),
            t.stars.stars().into(),
        ])?;
    }
    finish(w)
}

/// `axis,mean,sd,min,max`
pub fn axis_stats_csv(stats: &[AxisStats]) -> AppResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["axis", "mean", "sd", "min", "max"])?;
    for s in stats {
        w.write_record([s.axis_name.clone(), num(s.mean), num(s.sd), num(s.min), num(s.max)])?;
    }
    finish(w)
}

/// `term,estimate,std_error,t,p,stars`, then `R2` and `N` rows with the
/// value in the estimate column.
pub fn ols_csv(fit: &OlsFit) -> AppResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["term", "estimate", "std_error", "t", "p", "stars"])?;
    for i in 0..fit.terms.len() {
        w.write_record([
            fit.terms[i].clone(),
            num(fit.coefficients[i]),
            num(fit.std_errors[i]),
            num(fit.t_values[i]),
            num(fit.p_values[i]),
            fit.stars[i].stars().into(),
        ])?;
    }
    let blank = String::new;
    w.write_record(["R2".into(), num(fit.r_squared), blank(), blank(), blank(), blank()])?;
    w.write_record(["N".into(), fit.residuals.len().to_string(), blank(), blank(), blank(), blank()])?;
    finish(w)
}

/// `ball,size,<axis>_mean...,<axis>_sd...[,<attribute>_mean]`
pub fn summary_csv(axes: &[String], attribute: Option<&str>, rows: &[BallSummary]) -> AppResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["ball".to_string(), "size".to_string()];
    header.extend(axes.iter().map(|a| format!("{a}_mean")));
    header.extend(axes.iter().map(|a| format!("{a}_sd")));
    if let Some(name) = attribute {
        header.push(format!("{name}_mean"));
    }
    w.write_record(&header)?;
    for s in rows {
        let mut rec = vec![s.ball_id.to_string(), s.size.to_string()];
        rec.extend(s.axis_means.iter().map(|&v| num(v)));
        rec.extend(s.axis_sds.iter().map(|&v| num(v)));
        if attribute.is_some() {
            rec.push(s.attribute_mean.map(num).unwrap_or_default());
        }
        w.write_record(&rec)?;
    }
    finish(w)
}
