//! Star/null arrays used for node placement (`C`) and user retrieval (`U`).

/// An `F×n` array of stars and nulls, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StarGrid {
    rows: usize,
    cols: usize,
    stars: Vec<bool>,
}

impl StarGrid {
    pub fn from_fn(rows: usize, cols: usize, mut star: impl FnMut(usize, usize) -> bool) -> Self {
        let mut stars = Vec::with_capacity(rows * cols);
        for j in 0..rows {
            for k in 0..cols {
                stars.push(star(j, k));
            }
        }
        Self { rows, cols, stars }
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn is_star(&self, row: usize, col: usize) -> bool {
        self.stars[row * self.cols + col]
    }

    /// Rows holding a star in column `col`.
    pub fn star_rows(&self, col: usize) -> Vec<usize> {
        (0..self.rows).filter(|&j| self.is_star(j, col)).collect()
    }

    pub fn column_star_counts(&self) -> Vec<usize> {
        (0..self.cols).map(|k| (0..self.rows).filter(|&j| self.is_star(j, k)).count()).collect()
    }

    pub fn row_star_counts(&self) -> Vec<usize> {
        (0..self.rows).map(|j| (0..self.cols).filter(|&k| self.is_star(j, k)).count()).collect()
    }

    /// Cells as `*` and `.`, one row per line.
    pub fn row_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|j| {
                (0..self.cols)
                    .map(|k| if self.is_star(j, k) { "*" } else { "." }.to_string())
                    .collect()
            })
            .collect()
    }
}
