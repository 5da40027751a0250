"""Spectral clustering on the symmetric normalized Laplacian."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, eigsh
from sklearn.cluster import KMeans

from ..graph import Graph
from .base import ConvergenceError, DecomposerConfig, Method, Partition

DENSE_LIMIT = 1500


def normalized_adjacency(g: Graph) -> sp.csr_matrix:
    """D^-1/2 A D^-1/2, with isolated nodes left as zero rows."""
    deg = g.degrees.astype(float)
    inv = np.zeros_like(deg)
    nz = deg > 0
    inv[nz] = 1.0 / np.sqrt(deg[nz])
    d = sp.diags(inv)
    return (d @ g.to_scipy() @ d).tocsr()


def orthogonal_iteration(op, n: int, k: int, tol: float = 1e-8, max_sweeps: int = 5000, seed: int = 0, extra: int | None = None):
    """Leading ``k`` eigenpairs of a symmetric PSD operator by subspace iteration.

    Each sweep multiplies the block by ``op``, re-orthonormalises, and applies
    a Rayleigh-Ritz rotation. Columns whose residual drops below ``tol`` are
    locked and deflated from the rest of the block. The block carries
    ``extra`` guard vectors beyond ``k`` to speed up convergence. Raises
    :class:`ConvergenceError` if ``max_sweeps`` runs out.
    """
    rng = np.random.default_rng(seed)
    if extra is None:
        extra = max(5, k)
    width = min(n, k + extra)
    q, _ = np.linalg.qr(rng.standard_normal((n, width)))
    locked = np.empty((n, 0))
    locked_vals: list[float] = []
    residual = np.inf
    for _ in range(max_sweeps):
        z = op(q)
        if locked.shape[1]:
            z -= locked @ (locked.T @ z)
        q, _ = np.linalg.qr(z)
        h = q.T @ op(q)
        vals, vecs = np.linalg.eigh((h + h.T) / 2)
        idx = np.argsort(vals)[::-1]
        vals, q = vals[idx], q @ vecs[:, idx]
        res = np.linalg.norm(op(q) - q * vals, axis=0)
        need = k - locked.shape[1]
        residual = float(res[:need].max())
        done = 0
        while done < need and res[done] < tol:
            done += 1
        if done:
            locked = np.hstack([locked, q[:, :done]])
            locked_vals.extend(vals[:done].tolist())
            q = q[:, done:]
            if locked.shape[1] == k:
                return np.asarray(locked_vals), locked
    raise ConvergenceError(f"orthogonal iteration did not converge in {max_sweeps} sweeps", residual)


def laplacian_eigenvectors(g: Graph, k: int, cfg: DecomposerConfig) -> np.ndarray:
    """Eigenvectors for the ``k`` smallest eigenvalues of I - D^-1/2 A D^-1/2."""
    n = g.n
    norm_adj = normalized_adjacency(g)
    solver = cfg.eigensolver
    if solver == "auto":
        solver = "dense" if n <= DENSE_LIMIT or k >= n - 1 else "lanczos"
    if solver == "dense" or k >= n - 1:
        vals, vecs = np.linalg.eigh(np.eye(n) - norm_adj.toarray())
        return vecs[:, :k]
    # smallest of L = largest of (I + N) / 2, whose spectrum lies in [0, 1]
    shifted = (sp.identity(n, format="csr") + norm_adj) * 0.5
    if solver == "orthogonal":
        _, vecs = orthogonal_iteration(lambda x: shifted @ x, n, k, cfg.eig_tol, cfg.eig_max_sweeps, cfg.seed)
        return vecs
    v0 = np.random.default_rng(cfg.seed).standard_normal(n)
    try:
        vals, vecs = eigsh(shifted, k=k, which="LA", tol=cfg.eig_tol, maxiter=cfg.eig_max_sweeps * n, v0=v0)
    except ArpackNoConvergence as exc:
        x = exc.eigenvectors
        res = float(np.linalg.norm(shifted @ x - x * exc.eigenvalues, axis=0).max()) if x.size else np.inf
        raise ConvergenceError("Lanczos eigensolver did not converge", res) from exc
    return vecs[:, np.argsort(vals)[::-1]]


def spectral_cluster(g: Graph, cfg: DecomposerConfig | None = None) -> Partition:
    """k-means (k-means++ seeding, best of ``kmeans_restarts``) on row-normalised eigenvectors."""
    cfg = cfg or DecomposerConfig(method=Method.SPECTRAL)
    n = g.n
    if n == 0:
        return Partition.from_labels([])
    k = cfg.clusters_for(n)
    if k < 2:
        raise ValueError("spectral clustering needs k >= 2")
    if k >= n:
        return Partition.from_labels(np.arange(n))
    emb = laplacian_eigenvectors(g, k, cfg)
    norms = np.linalg.norm(emb, axis=1, keepdims=True)
    emb = np.divide(emb, norms, out=np.zeros_like(emb), where=norms > 0)
    km = KMeans(n_clusters=k, init="k-means++", n_init=cfg.kmeans_restarts, random_state=cfg.seed)
    with warnings.catch_warnings():
        # duplicate embedding rows can leave fewer than k distinct clusters
        warnings.simplefilter("ignore")
        labels = km.fit_predict(emb)
    return Partition.from_labels(labels)
