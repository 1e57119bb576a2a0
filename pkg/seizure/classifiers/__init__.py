"""
From-scratch baseline classifiers over feature vectors: k-nearest neighbors
(with Hart's condensation), kernel SVM trained by SMO, and logistic
regression.
"""

from seizure.classifiers.knn import (
    KnnModel,
    cnn_condense,
    cnn_train,
    knn_classify,
    knn_predict,
    knn_train,
)
from seizure.classifiers.logistic import (
    LrModel,
    lr_classify,
    lr_gradient,
    lr_loss,
    lr_predict,
    lr_predict_proba,
    lr_train,
)
from seizure.classifiers.svm import (
    KERNELS,
    SvmModel,
    kernel_matrix,
    svm_classify,
    svm_decision_function,
    svm_predict,
    svm_train,
)


__author__ = "Jérémie Lumbroso <lumbroso@cs.princeton.edu>"

__all__ = [
    "KnnModel",
    "knn_train",
    "knn_predict",
    "knn_classify",
    "cnn_condense",
    "cnn_train",

    "KERNELS",
    "SvmModel",
    "kernel_matrix",
    "svm_train",
    "svm_decision_function",
    "svm_predict",
    "svm_classify",

    "LrModel",
    "lr_loss",
    "lr_gradient",
    "lr_train",
    "lr_predict_proba",
    "lr_predict",
    "lr_classify",
]
