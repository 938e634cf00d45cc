/// A labelled table printed as `corner | h1 h2 …` followed by one
/// `label | c1 c2 …` line per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextTable {
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<(String, Vec<String>)>,
}

impl TextTable {
    pub fn render(&self) -> String {
        let mut out = format!("{} | {}\n", self.corner, self.columns.join(" "));
        for (label, cells) in &self.rows {
            out.push_str(label);
            out.push_str(" | ");
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }
}

impl std::fmt::Display for TextTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}
