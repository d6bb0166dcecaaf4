use std::fmt::Write as _;

use super::ReportError;
use crate::criteria::CriterionReport;

/// Fixed figure geometry, in pixels.
#[derive(Clone, Copy, Debug)]
pub struct Layout {
    pub width: f64,
    pub height: f64,
    pub left: f64,
    pub right: f64,
    pub top: f64,
    pub bottom: f64,
}

pub const LAYOUT: Layout = Layout {
    width: 600.0,
    height: 400.0,
    left: 60.0,
    right: 20.0,
    top: 40.0,
    bottom: 50.0,
};

impl Layout {
    pub fn plot_width(&self) -> f64 {
        self.width - self.left - self.right
    }

    pub fn plot_height(&self) -> f64 {
        self.height - self.top - self.bottom
    }

    pub fn baseline(&self) -> f64 {
        self.height - self.bottom
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Bar chart of cumulative counts over the ε grid. Bars share the plot
/// width equally (80% bar, 10% gap each side) and scale linearly with
/// `count / total`. Only bars are drawn as `<rect>`.
pub fn render_histogram_svg(report: &CriterionReport) -> Result<String, ReportError> {
    let h = report.histogram.as_ref().ok_or_else(|| ReportError::MissingHistogram {
        criterion: report.criterion.name(),
        encoder_id: report.encoder_id.clone(),
        dataset_id: report.dataset_id.clone(),
    })?;
    let l = LAYOUT;
    let n = h.epsilon_grid.len().max(1) as f64;
    let slot = l.plot_width() / n;
    let base = l.baseline();
    let mut title = format!("{} / {} / {}", report.criterion.name(), report.encoder_id, report.dataset_id);
    if let Some(k) = report.n {
        write!(title, " / n={k}").unwrap();
    }

    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{hh}" viewBox="0 0 {w} {hh}" font-family="sans-serif" font-size="11">"#,
        w = l.width,
        hh = l.height
    )
    .unwrap();
    writeln!(s, r#"<title>{}</title>"#, escape(&title)).unwrap();
    writeln!(s, r#"<text x="{:.3}" y="24" text-anchor="middle" font-size="14">{}</text>"#, l.width / 2.0, escape(&title)).unwrap();
    writeln!(
        s,
        r#"<line x1="{x:.3}" y1="{t:.3}" x2="{x:.3}" y2="{b:.3}" stroke="black"/>"#,
        x = l.left,
        t = l.top,
        b = base
    )
    .unwrap();
    writeln!(
        s,
        r#"<line x1="{x1:.3}" y1="{b:.3}" x2="{x2:.3}" y2="{b:.3}" stroke="black"/>"#,
        x1 = l.left,
        x2 = l.width - l.right,
        b = base
    )
    .unwrap();
    writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">{}</text>"#, l.left - 6.0, l.top + 4.0, h.total).unwrap();
    writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="end">0</text>"#, l.left - 6.0, base + 4.0).unwrap();
    for (i, (&eps, &count)) in h.epsilon_grid.iter().zip(&h.cumulative_counts).enumerate() {
        let height = if h.total == 0 {
            0.0
        } else {
            count as f64 / h.total as f64 * l.plot_height()
        };
        let x = l.left + i as f64 * slot + 0.1 * slot;
        writeln!(
            s,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{height:.3}" fill="steelblue"><title>ε &gt; {eps:.2}: {count}</title></rect>"#,
            y = base - height,
            w = 0.8 * slot,
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">{eps:.2}</text>"#,
            l.left + (i as f64 + 0.5) * slot,
            base + 16.0
        )
        .unwrap();
    }
    writeln!(s, r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">margin ε</text>"#, l.left + l.plot_width() / 2.0, l.height - 10.0).unwrap();
    writeln!(
        s,
        r#"<text x="16" y="{y:.3}" text-anchor="middle" transform="rotate(-90 16 {y:.3})">samples with margin &gt; ε</text>"#,
        y = l.top + l.plot_height() / 2.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    Ok(s)
}
