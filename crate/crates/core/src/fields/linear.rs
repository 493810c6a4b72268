use super::Elem;

/// An F_2-linear map on m-bit vectors, reduced to echelon form so that
/// preimages can be read off in O(m).
#[derive(Debug, Clone)]
pub struct F2LinearMap {
    /// `pivots[b]` = (image with leading bit b, a preimage of it).
    pivots: Vec<Option<(Elem, Elem)>>,
    kernel: Vec<Elem>,
}

impl F2LinearMap {
    pub fn new(m: u32, map: impl Fn(Elem) -> Elem) -> Self {
        let mut pivots: Vec<Option<(Elem, Elem)>> = vec![None; m as usize];
        let mut kernel = Vec::new();
        for j in 0..m {
            let mut img = map(1 << j);
            let mut pre: Elem = 1 << j;
            while img != 0 {
                let lead = 31 - img.leading_zeros();
                match pivots[lead as usize] {
                    Some((pi, pp)) => {
                        img ^= pi;
                        pre ^= pp;
                    }
                    None => break,
                }
            }
            if img == 0 {
                kernel.push(pre);
            } else {
                let lead = 31 - img.leading_zeros();
                pivots[lead as usize] = Some((img, pre));
            }
        }
        F2LinearMap { pivots, kernel }
    }

    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    /// One preimage of `w`, or `None` when `w` is outside the image.
    pub fn particular(&self, mut w: Elem) -> Option<Elem> {
        let mut pre = 0;
        while w != 0 {
            let lead = 31 - w.leading_zeros();
            let (pi, pp) = self.pivots.get(lead as usize).copied().flatten()?;
            w ^= pi;
            pre ^= pp;
        }
        Some(pre)
    }

    /// Every preimage of `w`, sorted.
    pub fn preimages(&self, w: Elem) -> Vec<Elem> {
        let Some(base) = self.particular(w) else {
            return Vec::new();
        };
        let mut out = vec![base];
        for &k in &self.kernel {
            let shifted: Vec<Elem> = out.iter().map(|&s| s ^ k).collect();
            out.extend(shifted);
        }
        out.sort_unstable();
        out
    }
}
