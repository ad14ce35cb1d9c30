"""Graph-signal denoising with regularization by denoising (RED).

Thin Python layer over the C++ core. Signals are 1-D numpy arrays indexed by
node; graphs are `Graph` objects built from an adjacency matrix or with
`knn_graph`.
"""

from ._core import (  # noqa: F401
    Graph,
    GraphRedError,
    add_noise,
    bandlimited_signal,
    check_homogeneity,
    check_passivity,
    denoise,
    fps,
    generate_sensor_points,
    gft,
    h_lr,
    h_red,
    igft,
    knn_graph,
    lr_denoise,
    normalize_weights,
    pnp_admm_denoise,
    red_cg_solve,
    red_gradient,
    red_gradient_descent,
    red_objective,
    rmse,
    run_cli,
    synthetic_sample,
    trainable_count,
    unrolled_forward,
)

__version__ = "0.1.0"


def main():
    """Console entry point mirroring the `graphred` executable."""
    import sys

    code, out, err = run_cli(sys.argv[1:])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
