# Copyright 2026 The mibound Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Fisher-information bounds on mutual information and Bayesian MSE."""

from mibound._core import (
    BUILTIN_MODELS,
    DEFAULT_SEED,
    ArgumentError,
    DomainError,
    Model,
    NumericError,
    ResourceError,
    gaussian_prior_mse_bounds,
    load_model,
    mi_cap,
    model_from_yaml,
    random_model,
    run_cli,
    verify,
)

__all__ = [
    "BUILTIN_MODELS",
    "DEFAULT_SEED",
    "ArgumentError",
    "DomainError",
    "Model",
    "NumericError",
    "ResourceError",
    "gaussian_prior_mse_bounds",
    "load_model",
    "mi_cap",
    "model_from_yaml",
    "random_model",
    "run_cli",
    "verify",
]
