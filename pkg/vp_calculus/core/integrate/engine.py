"""
VP Integration Engine

This module integrates a DistExpr over one variable at a time. A single pole
against a smooth weight is integrated by parts into endpoint log kernels,
endpoint poles and a conventional log integral; the new poles carry the VP
prescription in the remaining variables. Deltas are integrated by
substitution under Heaviside guards, products of poles are reduced first, and
anything else becomes a deferred numeric integral.

Guards that depend on the integration variable are resolved by splitting the
interval, which assumes lower <= upper for every step.
"""

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from vp_calculus.config.settings import Settings, get_settings
from vp_calculus.core.algebra.coeff import PiCoeff, coeff_to_float
from vp_calculus.core.errors import (
    DeltaAtEndpoint,
    DeltaNotEvaluable,
    NotSeparable,
    ParseError,
    PoleAtEndpoint,
    SingularEvaluation,
    SpecError,
    StepError,
    UnsupportedIntegrand,
)
from vp_calculus.core.expr.affine import AffineExpr, Var, format_affine, order_variables
from vp_calculus.core.expr.deltas import reduce_delta_chain
from vp_calculus.core.expr.expr import (
    DeferredIntegral,
    DistExpr,
    DistTerm,
    LogIntegralResidual,
    differentiate,
    differentiate_n,
    mul_expr,
    normalize,
    substitute,
)
from vp_calculus.core.expr.factors import (
    DeltaDeriv,
    Factor,
    HeavisideGuard,
    LogAbs,
    Smooth,
    VPPole,
)
from vp_calculus.core.expr.parser import parse_affine
from vp_calculus.core.expr.testfn import LINEAR, TestFn
from vp_calculus.core.integrate.numeric import integrate_expression
from vp_calculus.core.reduction import reduce_in_variable
from vp_calculus.utils.logging import get_context_logger, get_logger

logger = get_logger("vp_calculus.engine")

EXPLICIT = "explicit"
DERIVATIVE = "derivative"
AUTO = "auto"
FORMS = (EXPLICIT, DERIVATIVE, AUTO)

_STEP_RE = re.compile(r"^\s*(?P<var>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*(?P<lower>.+?)\s*\.\.\s*(?P<upper>.+?)\s*$")


@dataclass(frozen=True)
class IntegrationStep:
    var: Var
    lower: AffineExpr
    upper: AffineExpr

    def __str__(self) -> str:
        return f"{self.var}={format_affine(self.lower)}..{format_affine(self.upper)}"


@dataclass(frozen=True)
class IntegrationSpec:
    """
    Ordered integration steps, innermost first.

    Limits of a step may only depend on variables of later steps or on
    parameters.
    """

    steps: Tuple[IntegrationStep, ...]

    def __post_init__(self):
        if not self.steps:
            raise SpecError("An integration spec needs at least one step")
        seen = set()
        for step in self.steps:
            if step.var in seen:
                raise SpecError(f"Variable {step.var} is integrated twice")
            seen.add(step.var)
            for limit in (step.lower, step.upper):
                clash = limit.variables() & seen
                if clash:
                    raise SpecError(
                        f"Limit {format_affine(limit)} of step {step.var} depends on "
                        f"{', '.join(sorted(clash))}, which is integrated by then"
                    )

    @classmethod
    def of(cls, *steps: Tuple[Var, object, object]) -> "IntegrationSpec":
        """Build a spec from (var, lower, upper) triples; limits may be numbers, text or AffineExprs."""
        return cls(tuple(IntegrationStep(var, _as_affine(lo), _as_affine(hi)) for var, lo, hi in steps))

    @property
    def variables(self) -> Tuple[Var, ...]:
        return tuple(step.var for step in self.steps)

    def __str__(self) -> str:
        return ", ".join(str(step) for step in self.steps)


def _as_affine(value) -> AffineExpr:
    if isinstance(value, AffineExpr):
        return value
    if isinstance(value, str):
        return parse_affine(value)
    return AffineExpr.const(Fraction(value))


def parse_spec(text: str) -> IntegrationSpec:
    """
    Parse ``x=0..1, z1=0..2+z`` into an IntegrationSpec.

    Args:
        text (str): Comma-separated ``var=lower..upper`` steps, innermost first

    Returns:
        IntegrationSpec: The parsed spec

    Raises:
        SpecError: If the text is malformed
    """
    steps = []
    for chunk in text.split(","):
        if not chunk.strip():
            continue
        match = _STEP_RE.match(chunk)
        if match is None:
            raise SpecError(f"Bad integration step {chunk.strip()!r}; expected var=lower..upper")
        try:
            lower = parse_affine(match.group("lower"))
            upper = parse_affine(match.group("upper"))
        except ParseError as exc:
            raise SpecError(f"Bad limit in step {chunk.strip()!r}: {exc}") from exc
        steps.append(IntegrationStep(match.group("var"), lower, upper))
    if not steps:
        raise SpecError("Empty integration spec")
    return IntegrationSpec(tuple(steps))


@dataclass(frozen=True)
class IntegrationResult:
    """
    Outcome of a repeated integration: the value at the given parameters, an
    error estimate from the deferred numeric integrals, and the symbolic
    expression it was evaluated from.
    """

    value: float
    error: float
    expression: DistExpr
    spec: IntegrationSpec


def _as_expr(term: DistTerm) -> DistExpr:
    return DistExpr((term,))


def _split(term: DistTerm, var: Var) -> Tuple[DistTerm, DistExpr]:
    """Split a term into its var-free part and the product of its var-dependent factors."""
    outer = tuple(f for f in term.factors if not f.depends_on(var))
    inner = tuple(f for f in term.factors if f.depends_on(var))
    return DistTerm(term.coeff, outer), _as_expr(DistTerm(PiCoeff.one(), inner))


def _expand_log_derivatives(e: DistExpr, var: Var) -> DistExpr:
    terms = []
    for term in e.terms:
        coeff = term.coeff
        factors: List[Factor] = []
        for factor in term.factors:
            if isinstance(factor, LogAbs) and factor.order and factor.depends_on(var):
                weight, pole = factor.as_pole()
                coeff = coeff * weight
                factors.append(pole)
            else:
                factors.append(factor)
        terms.append(DistTerm(coeff, tuple(factors)))
    return normalize(DistExpr(tuple(terms)))


def _require_derivatives(expressions: Iterable[DistExpr]) -> None:
    """Raise MissingDerivatives when a smooth factor cannot supply its derivative."""
    for expression in expressions:
        for term in expression.terms:
            for factor in term.factors:
                if isinstance(factor, Smooth):
                    factor.fn.derivative(factor.orders)


def _pole_center(pole: VPPole, var: Var) -> Tuple[Fraction, AffineExpr]:
    slope = pole.arg.coeff(var)
    return slope, AffineExpr.var(var) - pole.arg.scale(1 / slope)


def _endpoint_kernel(distance: AffineExpr, k: int, form: str) -> Tuple[PiCoeff, Factor]:
    """
    Kernel paired with u^(n-k-1) at an endpoint, as (weight, factor).
    """
    if k == 0:
        return PiCoeff.one(), LogAbs(distance)
    if form == DERIVATIVE:
        # d^k/dy^k ln|limit - y|
        return PiCoeff.rational((-1) ** k), LogAbs(distance, k)
    return PiCoeff.rational(-math.factorial(k - 1)), VPPole(distance, k)


def integrate_vp_term(
    t: DistTerm, var: Var, a: AffineExpr, b: AffineExpr, form: str = EXPLICIT
) -> DistExpr:
    """
    Integrate a term holding one VP pole in ``var`` over [a, b].

    With pole VP 1/(x - y)^n and weight u the result is
    1/(n-1)! { -int_a^b ln|x - y| u^(n) dx + ln|b - y| u^(n-1)(b) - ln|a - y| u^(n-1)(a)
    - sum_{k=1}^{n-1} (k-1)! [VP 1/(b - y)^k u^(n-k-1)(b) - VP 1/(a - y)^k u^(n-k-1)(a)] }.
    The ``derivative`` form writes each endpoint pole as d^k/dy^k ln|limit - y|.
    The log integral is dropped when u^(n) vanishes identically.

    Args:
        t (DistTerm): The term
        var (str): Integration variable
        a (AffineExpr): Lower limit
        b (AffineExpr): Upper limit
        form (str): ``explicit`` or ``derivative``

    Returns:
        DistExpr: The integral in the remaining variables

    Raises:
        PoleAtEndpoint: If the pole center equals a limit
        MissingDerivatives: If the weight cannot be differentiated n times
        UnsupportedIntegrand: If the term does not hold exactly one pole in var
    """
    if form not in (EXPLICIT, DERIVATIVE):
        raise ValueError(f"Unknown result form {form!r}")
    expanded = _expand_log_derivatives(_as_expr(t), var)
    if len(expanded.terms) != 1:
        return sum((integrate_vp_term(term, var, a, b, form) for term in expanded.terms), DistExpr.zero())
    t = expanded.terms[0]
    poles = t.of_kind(VPPole, var)
    if len(poles) != 1:
        raise UnsupportedIntegrand(f"Expected exactly one pole in {var}, found {len(poles)}")
    if t.of_kind(DeltaDeriv, var):
        raise UnsupportedIntegrand(f"Delta in {var} must be integrated with integrate_delta")
    pole = poles[0]
    n = pole.degree
    slope, center = _pole_center(pole, var)
    if center == a or center == b:
        raise PoleAtEndpoint(f"Pole center {format_affine(center)} coincides with a limit of {var}")

    rest = DistTerm(t.coeff * PiCoeff.rational(slope**-n), t.without(pole))
    outer, weight = _split(rest, var)
    prefactor = PiCoeff.rational(Fraction(1, math.factorial(n - 1)))

    derivatives = [weight]
    for _ in range(n):
        derivatives.append(differentiate(derivatives[-1], var))
    _require_derivatives(derivatives)

    pieces: List[DistTerm] = []
    if not derivatives[n].is_zero():
        body = mul_expr(DistExpr.product(LogAbs(AffineExpr.var(var) - center)), derivatives[n])
        residual = LogIntegralResidual(var, a, b, body, deriv_order=n)
        pieces.append(DistTerm(-prefactor, (residual,)))

    for limit, sign in ((b, 1), (a, -1)):
        distance = limit - center
        for k in range(n):
            at_limit = substitute(derivatives[n - k - 1], var, limit)
            kernel_weight, kernel = _endpoint_kernel(distance, k, form)
            weight_k = PiCoeff.rational(sign) * kernel_weight * prefactor
            for term in at_limit.terms:
                pieces.append(DistTerm(weight_k * term.coeff, (kernel,) + term.factors))

    return mul_expr(_as_expr(outer), normalize(DistExpr(tuple(pieces))))


def integrate_separable(t: DistTerm, var: Var, a: AffineExpr, b: AffineExpr, phi_var: Var) -> DistExpr:
    """
    Integrate VP 1/(x - y)^n u(x) phi(y) over x in [a, b] with constant limits.

    The result is -phi(y)/(n-1)! (d/dy)^n int_a^b ln|x - y| u(x) dx, with each
    y-derivative moved onto u through the shift x -> x + y:
    d/dy int_a^b ln|x - y| g(x) dx = int_a^b ln|x - y| g'(x) dx - ln|b - y| g(b) + ln|a - y| g(a).

    Args:
        t (DistTerm): The term
        var (str): Integration variable x
        a (AffineExpr): Constant lower limit
        b (AffineExpr): Constant upper limit
        phi_var (str): The pole variable y

    Returns:
        DistExpr: The integral as a function of y

    Raises:
        NotSeparable: If the weight couples x and y, the limits are not
            constant or the pole is not a pole at x = y
    """
    if not (a.is_constant() and b.is_constant()):
        raise NotSeparable("Separable integration needs constant limits")
    expanded = _expand_log_derivatives(_as_expr(t), var)
    if len(expanded.terms) != 1:
        return sum((integrate_separable(term, var, a, b, phi_var) for term in expanded.terms), DistExpr.zero())
    t = expanded.terms[0]
    poles = t.of_kind(VPPole, var)
    if len(poles) != 1:
        raise NotSeparable(f"Expected exactly one pole in {var}, found {len(poles)}")
    pole = poles[0]
    n = pole.degree
    slope, center = _pole_center(pole, var)
    if center != AffineExpr.var(phi_var):
        raise NotSeparable(f"Pole {pole.to_text()} is not centered at {phi_var}")
    if center == a or center == b:
        raise PoleAtEndpoint(f"Pole center {phi_var} coincides with a limit of {var}")

    rest = DistTerm(t.coeff * PiCoeff.rational(slope**-n), t.without(pole))
    for factor in rest.factors:
        if factor.depends_on(var) and factor.depends_on(phi_var):
            raise NotSeparable(f"{factor.to_text()} depends on both {var} and {phi_var}")
    phi, u = _split(rest, var)
    if t.of_kind(DeltaDeriv, var):
        raise NotSeparable(f"Delta in {var} is not a smooth weight")

    y = AffineExpr.var(phi_var)
    g = u
    edges = DistExpr.zero()
    for _ in range(n):
        moved = DistExpr.zero()
        for limit, sign in ((b, -1), (a, 1)):
            moved = moved + mul_expr(DistExpr.product(LogAbs(limit - y), coeff=sign), substitute(g, var, limit))
        edges = differentiate(edges, phi_var) + moved
        g = differentiate(g, var)
    _require_derivatives([g])

    derived = edges
    if not g.is_zero():
        body = mul_expr(DistExpr.product(LogAbs(AffineExpr.var(var) - y)), g)
        derived = derived + DistExpr.product(LogIntegralResidual(var, a, b, body, deriv_order=n))
    prefactor = PiCoeff.rational(Fraction(-1, math.factorial(n - 1)))
    return mul_expr(_as_expr(phi), derived).scale(prefactor)


def integrate_delta(t: DistTerm, var: Var, a: AffineExpr, b: AffineExpr) -> DistExpr:
    """
    Integrate a term holding a delta in ``var`` over [a, b].

    The delta chain is reduced with ``var`` as first pivot, so exactly one
    delta^(k)(x - c) holds x. The result is (-1)^k d^k/dx^k of the rest at
    x = c, times theta(c - a) theta(b - c).

    Args:
        t (DistTerm): The term
        var (str): Integration variable
        a (AffineExpr): Lower limit
        b (AffineExpr): Upper limit

    Returns:
        DistExpr: The integral

    Raises:
        DeltaAtEndpoint: If the support equals a limit
        UnsupportedIntegrand: If the chain is degenerate or holds no delta in var
    """
    deltas = t.of_kind(DeltaDeriv)
    if not any(delta.depends_on(var) for delta in deltas):
        raise UnsupportedIntegrand(f"No delta in {var} to integrate")
    chain = reduce_delta_chain(deltas, order=(var,))
    if chain.degenerate:
        raise UnsupportedIntegrand("Delta chain with linearly dependent arguments")
    if not chain.terms:
        return DistExpr.zero()
    index = chain.pivots.index(var)
    support = -chain.rows[index].drop(var)
    if support == a or support == b:
        raise DeltaAtEndpoint(f"Delta support {var}={format_affine(support)} coincides with a limit")

    guards = DistExpr.product(HeavisideGuard(support - a), HeavisideGuard(b - support))
    if guards.is_zero():
        return guards
    rest = _as_expr(DistTerm(t.coeff, t.without(*deltas)))

    result = DistExpr.zero()
    for weight, orders in chain.terms:
        k = orders[index]
        others = tuple(delta for i, delta in enumerate(chain.deltas(orders)) if i != index)
        body = differentiate_n(rest, var, k).scale(PiCoeff.rational(weight * (-1) ** k))
        body = substitute(body, var, support)
        result = result + mul_expr(body, _as_expr(DistTerm(PiCoeff.one(), others)))
    return mul_expr(result, guards)


def _integrate_guarded(term: DistTerm, var: Var, a: AffineExpr, b: AffineExpr, form: str) -> DistExpr:
    guard = term.of_kind(HeavisideGuard, var)[0]
    rest = _as_expr(DistTerm(term.coeff, term.without(guard)))
    slope = guard.arg.coeff(var)
    edge = AffineExpr.var(var) - guard.arg.scale(1 / slope)

    if slope > 0:
        # theta(x - c): [max(a, c), b]
        if edge == a:
            return integrate_step(rest, var, a, b, form)
        if edge == b:
            return DistExpr.zero()
        inside = (DistExpr.product(HeavisideGuard(edge - a), HeavisideGuard(b - edge)), edge, b)
        whole = DistExpr.product(HeavisideGuard(a - edge))
    else:
        # theta(c - x): [a, min(b, c)]
        if edge == b:
            return integrate_step(rest, var, a, b, form)
        if edge == a:
            return DistExpr.zero()
        inside = (DistExpr.product(HeavisideGuard(edge - a), HeavisideGuard(b - edge)), a, edge)
        whole = DistExpr.product(HeavisideGuard(edge - b))

    result = DistExpr.zero()
    condition, lower, upper = inside
    if not condition.is_zero():
        result = result + mul_expr(condition, integrate_step(rest, var, lower, upper, form))
    if not whole.is_zero():
        result = result + mul_expr(whole, integrate_step(rest, var, a, b, form))
    return result


def _defer(term: DistTerm, var: Var, a: AffineExpr, b: AffineExpr) -> DistExpr:
    for pole in term.of_kind(VPPole, var):
        _, center = _pole_center(pole, var)
        if center == a or center == b:
            raise PoleAtEndpoint(f"Pole center {format_affine(center)} coincides with a limit of {var}")
    outer, inner = _split(term, var)
    return mul_expr(_as_expr(outer), DistExpr.product(DeferredIntegral(var, a, b, inner)))


def _integrate_term(term: DistTerm, var: Var, a: AffineExpr, b: AffineExpr, form: str) -> DistExpr:
    if not term.depends_on(var):
        return mul_expr(_as_expr(term), DistExpr.product(Smooth(LINEAR, (b - a,))))
    if term.of_kind(DeltaDeriv, var):
        return integrate_delta(term, var, a, b)
    if term.of_kind(HeavisideGuard, var):
        return _integrate_guarded(term, var, a, b, form)

    poles = term.of_kind(VPPole, var)
    if len(poles) >= 2:
        logger.debug(f"Reducing {len(poles)} poles in {var} before integration")
        return integrate_step(reduce_in_variable(_as_expr(term), var), var, a, b, form)

    others = [f for f in term.factors if f.depends_on(var) and f not in poles]
    if len(poles) == 1 and all(isinstance(f, Smooth) for f in others):
        return integrate_vp_term(term, var, a, b, EXPLICIT if form == AUTO else form)
    return _defer(term, var, a, b)


def integrate_step(e: DistExpr, var: Var, a: AffineExpr, b: AffineExpr, form: str = EXPLICIT) -> DistExpr:
    """
    Integrate an expression over ``var`` from ``a`` to ``b``.

    Terms are dispatched on what they hold in ``var``: deltas are substituted,
    guards split the interval, pole products are reduced, a single pole
    against a smooth weight is integrated by parts, and everything else
    becomes a DeferredIntegral.

    Args:
        e (DistExpr): The integrand
        var (str): Integration variable
        a (AffineExpr): Lower limit
        b (AffineExpr): Upper limit
        form (str): Result form for single poles, ``explicit`` or ``derivative``

    Returns:
        DistExpr: The integral, free of ``var``

    Raises:
        PoleAtEndpoint: If a pole center equals a limit
        DeltaAtEndpoint: If a delta support equals a limit
    """
    if form not in FORMS:
        raise ValueError(f"Unknown result form {form!r}")
    if a.depends_on(var) or b.depends_on(var):
        raise SpecError(f"Limits of {var} must not depend on {var}")
    result = DistExpr.zero()
    for term in _expand_log_derivatives(e, var).terms:
        result = result + _integrate_term(term, var, a, b, form)
    return result


def _attach_weight(e: DistExpr, spec: IntegrationSpec, u: TestFn, u_args: Optional[Sequence[Var]]) -> DistExpr:
    names = tuple(u_args) if u_args else order_variables(spec.variables)
    if len(names) != u.arity:
        raise SpecError(f"Test function {u.name} takes {u.arity} arguments, got {len(names)} variables")
    return mul_expr(e, DistExpr.product(Smooth(u, tuple(AffineExpr.var(name) for name in names))))


def integrate_symbolic(
    e: DistExpr,
    spec: IntegrationSpec,
    u: Optional[TestFn] = None,
    u_args: Optional[Sequence[Var]] = None,
    form: str = AUTO,
) -> DistExpr:
    """
    Run every step of a spec symbolically.

    With ``form="auto"`` single poles use the derivative form while another
    step follows and the explicit form on the last step.

    Args:
        e (DistExpr): The integrand
        spec (IntegrationSpec): Steps, innermost first
        u (TestFn, optional): Weight multiplied in before the first step
        u_args (Sequence[str], optional): Variables passed to ``u``;
            defaults to the spec variables in canonical order
        form (str): ``auto``, ``explicit`` or ``derivative``

    Returns:
        DistExpr: The integral as an expression in the parameters

    Raises:
        StepError: Tagged with the index of the failing step
    """
    if form not in FORMS:
        raise ValueError(f"Unknown result form {form!r}")
    current = normalize(e)
    if u is not None:
        current = _attach_weight(current, spec, u, u_args)

    last = len(spec.steps) - 1
    for index, step in enumerate(spec.steps):
        step_form = form
        if form == AUTO:
            step_form = DERIVATIVE if index < last else EXPLICIT
        step_logger = get_context_logger("vp_calculus.engine", {"step": index, "var": step.var})
        step_logger.debug(f"Integrating {len(current.terms)} terms over {step}")
        try:
            current = integrate_step(current, step.var, step.lower, step.upper, step_form)
        except StepError as exc:
            raise exc.at_step(index) from exc
        step_logger.debug(f"Step produced {len(current.terms)} terms")
    return current


def _evaluate_with_error(
    e: DistExpr, assignment: Mapping[Var, float], settings: Settings
) -> Tuple[float, float]:
    total, error = 0.0, 0.0
    for term in e.terms:
        value, spread = coeff_to_float(term.coeff), 0.0
        for factor in term.factors:
            if isinstance(factor, DeltaDeriv):
                raise DeltaNotEvaluable(f"Cannot evaluate {factor.to_text()} pointwise")
            if isinstance(factor, DeferredIntegral):
                estimate = integrate_expression(
                    factor.body, factor.var, factor.lower, factor.upper, assignment, settings
                )
                factor_value, factor_error = estimate.value, estimate.error
            else:
                if isinstance(factor, (VPPole, LogAbs)):
                    if abs(float(factor.arg.evaluate(assignment))) < settings.singular_tol:
                        raise SingularEvaluation(f"{factor.to_text()} is singular at {dict(assignment)}")
                factor_value, factor_error = float(factor.evaluate(assignment)), 0.0
            spread = abs(value) * factor_error + spread * abs(factor_value)
            value = value * factor_value
        total += value
        error += spread
    return total, error


def repeated_integrate(
    e: DistExpr,
    spec: IntegrationSpec,
    u: Optional[TestFn] = None,
    params: Optional[Mapping[Var, float]] = None,
    u_args: Optional[Sequence[Var]] = None,
    form: str = AUTO,
    settings: Optional[Settings] = None,
) -> IntegrationResult:
    """
    Integrate over every step of a spec and evaluate the result.

    Args:
        e (DistExpr): The integrand
        spec (IntegrationSpec): Steps, innermost first
        u (TestFn, optional): Weight multiplied in before the first step
        params (Mapping[str, float], optional): Values of free parameters
        u_args (Sequence[str], optional): Variables passed to ``u``
        form (str): ``auto``, ``explicit`` or ``derivative``
        settings (Settings, optional): Numeric settings

    Returns:
        IntegrationResult: Value, error estimate and the symbolic result

    Raises:
        SpecError: If a free variable is neither integrated nor a parameter
        StepError: Tagged with the index of the failing step
        DeltaNotEvaluable: If the result still holds a delta in the parameters
    """
    settings = settings or get_settings()
    params = dict(params or {})
    bound = set(spec.variables) | set(params)
    free = set(e.free_vars)
    for step in spec.steps:
        free |= step.lower.variables() | step.upper.variables()
    if u_args:
        free |= set(u_args)
    unbound = free - bound
    if unbound:
        raise SpecError(f"Unbound variables: {', '.join(order_variables(unbound))}")

    expression = integrate_symbolic(e, spec, u, u_args, form)
    value, error = _evaluate_with_error(expression, params, settings)
    logger.info(f"Integrated over {spec}: value={value:.12g} error={error:.2g}")
    return IntegrationResult(value, error, expression, spec)


def evaluate_result(expression: DistExpr, params: Mapping[Var, float], settings: Optional[Settings] = None) -> Tuple[float, float]:
    """
    Evaluate a symbolic integration result at parameter values.

    Returns:
        tuple: (value, error estimate)
    """
    return _evaluate_with_error(expression, dict(params), settings or get_settings())
