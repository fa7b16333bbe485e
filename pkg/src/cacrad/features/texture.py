"""Descriptor formulas over the five texture matrices.

GLCM and GLRLM descriptors are computed per direction and arithmetically
averaged over directions that contain counts. Degenerate 0/0 cases
substitute 0, correlation-like cases substitute 1, and the NGTDM
coarseness guard substitutes 1e6; every return value is finite.
"""

import numpy as np

from ..texmat import Glcm, Gldm, Glrlm, Glszm, Ngtdm

COARSENESS_GUARD = 1e6


def _entropy(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-(nz * np.log2(nz)).sum()) + 0.0  # +0.0 avoids -0.0


def _glcm_one(p: np.ndarray, ng: int) -> dict:
    i = np.arange(1, ng + 1, dtype=np.float64)
    ii = i[:, None]
    jj = i[None, :]
    px = p.sum(axis=1)  # symmetric matrix: both marginals coincide
    mu = float((i * px).sum())
    sig2 = float(((i - mu) ** 2 * px).sum())

    ksum = np.arange(2 * ng + 1, dtype=np.float64)
    psum = np.zeros(2 * ng + 1)
    np.add.at(psum, (ii + jj).astype(int).ravel(), p.ravel())
    kdiff = np.arange(ng, dtype=np.float64)
    pdiff = np.zeros(ng)
    np.add.at(pdiff, np.abs(ii - jj).astype(int).ravel(), p.ravel())

    autoc = float((ii * jj * p).sum())
    corr = (autoc - mu * mu) / sig2 if sig2 > 0 else 1.0
    diff_avg = float((kdiff * pdiff).sum())

    hx = _entropy(px)
    hxy = _entropy(p)
    outer = px[:, None] * px[None, :]
    pos = (p > 0) & (outer > 0)
    hxy1 = float(-(p[pos] * np.log2(outer[pos])).sum())
    hxy2 = _entropy(outer)
    imc1 = (hxy - hxy1) / hx if hx > 0 else 0.0
    imc2 = float(np.sqrt(max(0.0, 1.0 - np.exp(-2.0 * (hxy2 - hxy)))))

    present = px > 0
    if present.sum() < 2:
        mcc = 1.0
    else:
        sub = p[np.ix_(present, present)]
        pxs = sub.sum(axis=1)
        q = (sub / pxs[:, None]) @ (sub / pxs[None, :]).T
        eig = np.sort(np.linalg.eigvals(q).real)
        mcc = float(np.sqrt(max(0.0, eig[-2])))

    return {
        "Autocorrelation": autoc,
        "ClusterProminence": float(((ii + jj - 2 * mu) ** 4 * p).sum()),
        "ClusterShade": float(((ii + jj - 2 * mu) ** 3 * p).sum()),
        "ClusterTendency": float(((ii + jj - 2 * mu) ** 2 * p).sum()),
        "Contrast": float(((ii - jj) ** 2 * p).sum()),
        "Correlation": corr,
        "DifferenceAverage": diff_avg,
        "DifferenceEntropy": _entropy(pdiff),
        "DifferenceVariance": float(((kdiff - diff_avg) ** 2 * pdiff).sum()),
        "Id": float((pdiff / (1.0 + kdiff)).sum()),
        "Idm": float((pdiff / (1.0 + kdiff ** 2)).sum()),
        "Idmn": float((pdiff / (1.0 + kdiff ** 2 / ng ** 2)).sum()),
        "Idn": float((pdiff / (1.0 + kdiff / ng)).sum()),
        "Imc1": imc1,
        "Imc2": imc2,
        "InverseVariance": float((pdiff[1:] / kdiff[1:] ** 2).sum()),
        "JointAverage": mu,
        "JointEnergy": float((p ** 2).sum()),
        "JointEntropy": hxy,
        "MCC": mcc,
        "MaximumProbability": float(p.max()),
        "SumAverage": float((ksum * psum).sum()),
        "SumEntropy": _entropy(psum),
        "SumSquares": sig2,
    }


_GLCM_EMPTY = {
    name: (1.0 if name in ("Correlation", "MCC") else 0.0)
    for name in (
        "Autocorrelation", "ClusterProminence", "ClusterShade", "ClusterTendency",
        "Contrast", "Correlation", "DifferenceAverage", "DifferenceEntropy",
        "DifferenceVariance", "Id", "Idm", "Idmn", "Idn", "Imc1", "Imc2",
        "InverseVariance", "JointAverage", "JointEnergy", "JointEntropy", "MCC",
        "MaximumProbability", "SumAverage", "SumEntropy", "SumSquares",
    )
}


def glcm_features(m: Glcm) -> dict:
    ng = m.counts.shape[1]
    per_dir = []
    for k in range(m.counts.shape[0]):
        total = m.counts[k].sum()
        if total == 0:
            continue
        per_dir.append(_glcm_one(m.counts[k] / total, ng))
    if not per_dir:
        # no voxel pair in any direction (e.g. single-voxel region)
        return dict(_GLCM_EMPTY)
    return {key: float(np.mean([d[key] for d in per_dir])) for key in per_dir[0]}


def _weighted_family(mat: np.ndarray, row_weights: np.ndarray, col_weights: np.ndarray):
    """Shared algebra for run/zone/dependence families.

    Returns the sums and distribution moments every family reuses;
    ``nz`` is total entries, ``nw`` total weighted mass (voxel count).
    """
    nz = float(mat.sum())
    i = row_weights[:, None]
    j = col_weights[None, :]
    p = mat / nz
    pi = p.sum(axis=1)
    pj = p.sum(axis=0)
    mu_i = float((row_weights * pi).sum())
    mu_j = float((col_weights * pj).sum())
    return {
        "nz": nz,
        "nw": float((mat * j).sum()),
        "low": float((mat / i ** 2).sum()) / nz,
        "high": float((mat * i ** 2).sum()) / nz,
        "short": float((mat / j ** 2).sum()) / nz,
        "long": float((mat * j ** 2).sum()) / nz,
        "short_low": float((mat / (i ** 2 * j ** 2)).sum()) / nz,
        "short_high": float((mat * i ** 2 / j ** 2).sum()) / nz,
        "long_low": float((mat * j ** 2 / i ** 2).sum()) / nz,
        "long_high": float((mat * (i ** 2) * (j ** 2)).sum()) / nz,
        "gln": float((mat.sum(axis=1) ** 2).sum()) / nz,
        "cln": float((mat.sum(axis=0) ** 2).sum()) / nz,
        "gl_var": float((((row_weights - mu_i) ** 2) * pi).sum()),
        "col_var": float((((col_weights - mu_j) ** 2) * pj).sum()),
        "entropy": _entropy(p),
    }


def _glrlm_one(mat: np.ndarray) -> dict:
    ng, nr = mat.shape
    f = _weighted_family(mat, np.arange(1, ng + 1, dtype=np.float64),
                         np.arange(1, nr + 1, dtype=np.float64))
    return {
        "GrayLevelNonUniformity": f["gln"],
        "GrayLevelNonUniformityNormalized": f["gln"] / f["nz"],
        "GrayLevelVariance": f["gl_var"],
        "HighGrayLevelRunEmphasis": f["high"],
        "LongRunEmphasis": f["long"],
        "LongRunHighGrayLevelEmphasis": f["long_high"],
        "LongRunLowGrayLevelEmphasis": f["long_low"],
        "LowGrayLevelRunEmphasis": f["low"],
        "RunEntropy": f["entropy"],
        "RunLengthNonUniformity": f["cln"],
        "RunLengthNonUniformityNormalized": f["cln"] / f["nz"],
        "RunPercentage": f["nz"] / f["nw"],
        "RunVariance": f["col_var"],
        "ShortRunEmphasis": f["short"],
        "ShortRunHighGrayLevelEmphasis": f["short_high"],
        "ShortRunLowGrayLevelEmphasis": f["short_low"],
    }


def glrlm_features(m: Glrlm) -> dict:
    per_dir = [_glrlm_one(m.counts[k].astype(np.float64))
               for k in range(m.counts.shape[0]) if m.counts[k].sum() > 0]
    return {key: float(np.mean([d[key] for d in per_dir])) for key in per_dir[0]}


def glszm_features(m: Glszm) -> dict:
    mat = m.counts.astype(np.float64)
    ng, ns = mat.shape
    f = _weighted_family(mat, np.arange(1, ng + 1, dtype=np.float64),
                         np.arange(1, ns + 1, dtype=np.float64))
    return {
        "GrayLevelNonUniformity": f["gln"],
        "GrayLevelNonUniformityNormalized": f["gln"] / f["nz"],
        "GrayLevelVariance": f["gl_var"],
        "HighGrayLevelZoneEmphasis": f["high"],
        "LargeAreaEmphasis": f["long"],
        "LargeAreaHighGrayLevelEmphasis": f["long_high"],
        "LargeAreaLowGrayLevelEmphasis": f["long_low"],
        "LowGrayLevelZoneEmphasis": f["low"],
        "SizeZoneNonUniformity": f["cln"],
        "SizeZoneNonUniformityNormalized": f["cln"] / f["nz"],
        "SmallAreaEmphasis": f["short"],
        "SmallAreaHighGrayLevelEmphasis": f["short_high"],
        "SmallAreaLowGrayLevelEmphasis": f["short_low"],
        "ZoneEntropy": f["entropy"],
        "ZonePercentage": f["nz"] / f["nw"],
        "ZoneVariance": f["col_var"],
    }


def gldm_features(m: Gldm) -> dict:
    mat = m.counts.astype(np.float64)
    ng, nd = mat.shape
    # column k counts k dependent neighbors; weight as dependence size k+1
    f = _weighted_family(mat, np.arange(1, ng + 1, dtype=np.float64),
                         np.arange(1, nd + 1, dtype=np.float64))
    return {
        "DependenceEntropy": f["entropy"],
        "DependenceNonUniformity": f["cln"],
        "DependenceNonUniformityNormalized": f["cln"] / f["nz"],
        "DependenceVariance": f["col_var"],
        "GrayLevelNonUniformity": f["gln"],
        "GrayLevelVariance": f["gl_var"],
        "HighGrayLevelEmphasis": f["high"],
        "LargeDependenceEmphasis": f["long"],
        "LargeDependenceHighGrayLevelEmphasis": f["long_high"],
        "LargeDependenceLowGrayLevelEmphasis": f["long_low"],
        "LowGrayLevelEmphasis": f["low"],
        "SmallDependenceEmphasis": f["short"],
        "SmallDependenceHighGrayLevelEmphasis": f["short_high"],
        "SmallDependenceLowGrayLevelEmphasis": f["short_low"],
    }


def ngtdm_features(t: Ngtdm) -> dict:
    p = t.p
    s = t.s
    nvp = t.valid_count
    present = p > 0
    i = np.arange(1, len(p) + 1, dtype=np.float64)
    ngp = int(present.sum())

    ps = float((p * s).sum())
    coarseness = 1.0 / ps if ps > 0 else COARSENESS_GUARD

    if ngp <= 1 or nvp == 0:
        contrast = 0.0
    else:
        ipres = i[present]
        ppres = p[present]
        pair = float((ppres[:, None] * ppres[None, :]
                      * (ipres[:, None] - ipres[None, :]) ** 2).sum())
        contrast = pair / (ngp * (ngp - 1)) * float(s.sum()) / nvp

    if ngp == 0:
        busyness = 0.0
        complexity = 0.0
        strength = 0.0
    else:
        ipres = i[present]
        ppres = p[present]
        spres = s[present]
        denom = float(np.abs(ipres[:, None] * ppres[:, None]
                             - ipres[None, :] * ppres[None, :]).sum())
        busyness = ps / denom if denom > 0 else 0.0
        pi_ = ppres[:, None]
        pj_ = ppres[None, :]
        si_ = spres[:, None]
        sj_ = spres[None, :]
        dij = np.abs(ipres[:, None] - ipres[None, :])
        complexity = float((dij * (pi_ * si_ + pj_ * sj_) / (pi_ + pj_)).sum()) / nvp
        s_total = float(s.sum())
        strength = (float(((pi_ + pj_) * dij ** 2).sum()) / s_total
                    if s_total > 0 else 0.0)

    return {
        "Busyness": busyness,
        "Coarseness": coarseness,
        "Complexity": complexity,
        "Contrast": contrast,
        "Strength": strength,
    }
