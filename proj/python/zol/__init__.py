"""Gradient-free robust binary classification.

Linear and single-hidden-layer 01-loss classifiers trained by stochastic
coordinate descent, convex baselines, and a substitute-model black-box
attack harness. The heavy lifting lives in the C++ extension module.
"""

from ._core import (  # noqa: F401
    AdvTrainConfig,
    AttackConfig,
    AttackEpochRecord,
    AttackTrace,
    Dataset,
    Hyperplane,
    LinearSvmModel,
    LogMlpEnsemble,
    LogisticMlpConfig,
    LogisticMlpModel,
    Mlp01Config,
    Mlp01Ensemble,
    Mlp01Model,
    ScdConfig,
    ScdEnsemble,
    SplitSpec,
    SvmEnsemble,
    ZolError,
    accuracy,
    adv_train_hinge,
    adv_train_scd01,
    blackbox_attack,
    gen_complex,
    gen_simple,
    input_gradient,
    load_idx,
    load_matrix,
    load_model,
    loss01_linear,
    loss01_mlp,
    save_idx,
    save_matrix,
    save_model,
    scd01_substitute_attack,
    set_max_threads,
    split,
    train_hinge,
    train_logistic_mlp,
    train_mlp01,
    train_mlp01_single,
    train_scd01,
    train_scd01_majvote,
    transfer_matrix,
    whitebox_linear_attack,
)

__version__ = "0.1.0"
