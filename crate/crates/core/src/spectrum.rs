use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectrumSource {
    TriangularDual,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: usize,
}

/// Eigenvalues grouped by multiplicity, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Eigenvalue>,
    pub source: SpectrumSource,
}

impl SpectrumReport {
    /// Groups raw values: a value joins the current group when it lies
    /// within `tol` of the group's previous member. Group value is the mean.
    pub fn from_values(mut values: Vec<f64>, tol: f64, source: SpectrumSource) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        let mut eigenvalues: Vec<Eigenvalue> = Vec::new();
        let mut sum = 0.0;
        let mut last = f64::NAN;
        for v in values {
            match eigenvalues.last_mut() {
                Some(g) if (last - v).abs() <= tol => {
                    g.multiplicity += 1;
                    sum += v;
                    g.value = sum / g.multiplicity as f64;
                }
                _ => {
                    eigenvalues.push(Eigenvalue {
                        value: v,
                        multiplicity: 1,
                    });
                    sum = v;
                }
            }
            last = v;
        }
        SpectrumReport {
            eigenvalues,
            source,
        }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity).sum()
    }

    /// Each group value repeated by its multiplicity, descending.
    pub fn values(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    /// Same multiset of eigenvalues up to `tol`.
    pub fn matches(&self, other: &SpectrumReport, tol: f64) -> bool {
        let a = self.values();
        let b = other.values();
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
    }

    /// Same distinct eigenvalues up to `tol`, ignoring multiplicities.
    pub fn same_support(&self, other: &SpectrumReport, tol: f64) -> bool {
        self.eigenvalues.len() == other.eigenvalues.len()
            && self
                .eigenvalues
                .iter()
                .zip(&other.eigenvalues)
                .all(|(x, y)| (x.value - y.value).abs() <= tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn groups_close_values() {
        let s = SpectrumReport::from_values(
            vec![0.5, 1.0, 0.5 + 1e-9, 0.0],
            1e-7,
            SpectrumSource::Numeric,
        );
        assert_eq!(s.eigenvalues.len(), 3);
        assert_eq!(s.eigenvalues[1].multiplicity, 2);
        assert_eq!(s.total_multiplicity(), 4);
        assert_eq!(s.values()[0], 1.0);
    }
}
