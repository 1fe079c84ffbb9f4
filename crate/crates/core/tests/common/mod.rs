/// Line-by-line port of the reference `buildGI2(MG, g, ip)`, 1-based
/// indices shifted down by one.
pub fn reference_gi2(mg: usize, g: f64, ip: usize) -> Vec<Vec<f64>> {
    let ns: Vec<f64> = (1..mg).map(|j| (2 * j + ip) as f64).collect();
    let dm: Vec<f64> = ns
        .iter()
        .map(|n| 1.0 / (4.0 * (g + n + 1.0) * (g + n)))
        .collect();
    let d0: Vec<f64> = ns
        .iter()
        .map(|n| -1.0 / (2.0 * (g + n + 1.0) * (g + n - 1.0)))
        .collect();
    let dp: Vec<f64> = ns
        .iter()
        .map(|n| 1.0 / (4.0 * (g + n) * (g + n - 1.0)))
        .collect();

    let size = mg - 1;
    let mut t = vec![vec![0.0; size]; size];
    for i in 0..size {
        t[i][i] = d0[i];
        if i >= 1 {
            t[i][i - 1] = dm[i - 1]; // dm(1:MG-2) on the subdiagonal
        }
        if i + 1 < size {
            t[i][i + 1] = dp[i + 1]; // dp(2:MG-1) on the superdiagonal
        }
    }

    let mut kn = Vec::new();
    if mg > 2 {
        let k3 = (2.0 * g - 1.0) * (3.0 - 2.0 * g) / 120.0;
        kn.push(if ip == 0 {
            (4.0 * g * g - 1.0) * (3.0 - 2.0 * g) / 720.0
        } else {
            k3 * (2.0 * g + 2.0) * (2.0 * g + 1.0) / 42.0
        });
        for m in 2..=mg - 2 {
            let n = (2 * m + ip) as f64;
            let prev = kn[m - 2];
            kn.push(prev * (2.0 * g + n - 1.0) * (2.0 * g + n - 2.0) / ((n + 4.0) * (n + 3.0)));
        }
    }

    let (m00, m01, m10) = if ip == 0 {
        (
            -(2.0 * g + 1.0) / (4.0 * g + 4.0),
            (7.0 - g - 2.0 * g * g) * (1.0 + 2.0 * g) / (48.0 * (2.0 + g) * (1.0 + g)),
            1.0 / (2.0 * g + 2.0),
        )
    } else {
        let k3 = (2.0 * g - 1.0) * (3.0 - 2.0 * g) / 120.0;
        (
            -(2.0 * g + 1.0) / (12.0 * g + 24.0),
            1.0 / (4.0 * (g + 3.0) * (g + 2.0)) + k3,
            1.0 / (4.0 * (g + 1.0) * (g + 2.0)),
        )
    };

    let mut out = Vec::with_capacity(mg + 1);
    let mut r1 = vec![m00, m01];
    r1.extend(&kn);
    out.push(r1);
    for (i, ti) in t.iter().enumerate().take(size) {
        let mut row = vec![if i == 0 { m10 } else { 0.0 }];
        row.extend(ti);
        out.push(row);
    }
    let mut re = vec![0.0; mg - 1];
    re.push(*dm.last().unwrap());
    out.push(re);
    out
}
