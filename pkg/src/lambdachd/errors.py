# Copyright 2026 The lambdachd Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""The errors raised by lambdachd. Parameter and configuration problems are
`ValueError`s while numerical degeneracies are `ArithmeticError`s. The command
line interface maps the two families to distinct exit codes."""


class LambdaChdError(Exception):
    """The base class of all lambdachd errors."""


class InvalidParams(LambdaChdError, ValueError):
    """The atom-laser parameters violate an invariant."""


class ConfigError(LambdaChdError, ValueError):
    """A run configuration could not be parsed or validated."""


class NumericalError(LambdaChdError, ArithmeticError):
    """The base class of numerical degeneracy errors."""


class NonUniqueSteadyState(NumericalError):
    """The Bloch generator has more than one stationary solution."""


class PropagationDiverged(NumericalError):
    """A propagated correlation vector grew instead of decaying."""


class DegenerateQuadrature(NumericalError):
    """The stationary quadrature amplitude vanishes for the chosen phase."""


class VanishingExcitation(NumericalError):
    """The excited state population vanishes (exact population trapping)."""


class SingularResolvent(NumericalError):
    """A resolvent solve did not reproduce its right hand side."""


class StepTooLarge(NumericalError):
    """A fixed step integration drifted in trace."""


class TruncationWarning(UserWarning):
    """A quadrature was truncated before its integrand decayed."""
