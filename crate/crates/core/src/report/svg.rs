use std::fmt::Write;

/// Escapes text for element content and attribute values.
pub fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Coordinates are written with two decimals so output never depends on
/// float printing details.
pub fn num(x: f64) -> String {
    format!("{x:.2}")
}

/// Value annotations: one decimal.
pub fn label(x: f64) -> String {
    format!("{x:.1}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Start,
    Middle,
    End,
}

impl Anchor {
    fn as_str(self) -> &'static str {
        match self {
            Anchor::Start => "start",
            Anchor::Middle => "middle",
            Anchor::End => "end",
        }
    }
}

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            body: String::new(),
        }
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, class: &str) {
        let _ = writeln!(
            self.body,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" fill="{fill}"/>"#,
            num(x),
            num(y),
            num(w.max(0.0)),
            num(h.max(0.0))
        );
    }

    pub fn text(&mut self, x: f64, y: f64, anchor: Anchor, size: f64, fill: &str, content: &str) {
        let _ = writeln!(
            self.body,
            r#"<text x="{}" y="{}" text-anchor="{}" font-size="{}" fill="{fill}">{}</text>"#,
            num(x),
            num(y),
            anchor.as_str(),
            num(size),
            escape(content)
        );
    }

    /// Text rotated about its anchor point.
    pub fn text_rotated(&mut self, x: f64, y: f64, degrees: f64, anchor: Anchor, size: f64, content: &str) {
        let _ = writeln!(
            self.body,
            r##"<text x="{x}" y="{y}" transform="rotate({} {x} {y})" text-anchor="{}" font-size="{}" fill="#222222">{}</text>"##,
            num(degrees),
            anchor.as_str(),
            num(size),
            escape(content),
            x = num(x),
            y = num(y),
        );
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, class: &str) {
        let _ = writeln!(
            self.body,
            r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
            num(x1),
            num(y1),
            num(x2),
            num(y2)
        );
    }

    pub fn path(&mut self, d: &str, stroke: &str, class: &str) {
        let _ = writeln!(
            self.body,
            r#"<path class="{class}" d="{d}" fill="none" stroke="{stroke}" stroke-width="1"/>"#
        );
    }

    pub fn title(&mut self, title: &str) {
        self.text(self.width / 2.0, 24.0, Anchor::Middle, 16.0, "#111111", title);
    }

    pub fn finish(self) -> String {
        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="Helvetica, Arial, sans-serif" style="background:#ffffff">"#,
            w = num(self.width),
            h = num(self.height)
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

pub type Rgb = (u8, u8, u8);

pub fn hex(c: Rgb) -> String {
    format!("#{:02x}{:02x}{:02x}", c.0, c.1, c.2)
}

pub const BLUE: Rgb = (0x21, 0x66, 0xac);
pub const MID: Rgb = (0xf7, 0xf7, 0xf7);
pub const RED: Rgb = (0xb2, 0x18, 0x2b);

fn mix(a: Rgb, b: Rgb, t: f64) -> Rgb {
    let f = |x: u8, y: u8| (x as f64 + (y as f64 - x as f64) * t).round() as u8;
    (f(a.0, b.0), f(a.1, b.1), f(a.2, b.2))
}

/// Blue at `t = 0`, near-white at `0.5`, red at `1`.
pub fn diverging(t: f64) -> Rgb {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.5 };
    if t <= 0.5 {
        mix(BLUE, MID, t * 2.0)
    } else {
        mix(MID, RED, (t - 0.5) * 2.0)
    }
}

/// Categorical series colors.
pub const SERIES: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];
