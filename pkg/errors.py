"""
Error types. Every error carries a stable `code` so the CLI and the tests can
tell failures apart without parsing messages. Mathematical failures are never
raised: the checkers return FAIL reports with a witness instead.
"""


class AlgebraError(Exception):
    code = "E_ALGEBRA"

    def __init__(self, message, **fields):
        super().__init__(message)
        self.fields = fields

    def to_dict(self):
        return {"code": self.code, "message": str(self), **{k: str(v) for k, v in self.fields.items()}}


class DimensionMismatch(AlgebraError):
    code = "E_DIM"

    def __init__(self, what, left, right):
        super().__init__(f"{what}: dimension mismatch ({left} vs {right})", left=left, right=right)
        self.left, self.right = left, right


class ArityMismatch(AlgebraError):
    code = "E_ARITY"


class PreconditionError(AlgebraError):
    code = "E_PRECONDITION"


class FundamentalIdentityError(PreconditionError):
    code = "E_FI"

    def __init__(self, report):
        super().__init__(f"the bracket violates the Fundamental Identity: {report.witness}")
        self.report = report


class NambuPoissonError(PreconditionError):
    code = "E_NP"


class DegreeOverflowError(AlgebraError):
    code = "E_DEGREE"

    def __init__(self, degree, limit):
        super().__init__(f"polynomial degree {degree} exceeds the configured cap {limit}",
                         degree=degree, limit=limit)


class InstanceError(AlgebraError):
    """Problems reading an instance file; `code` is set per instance"""

    def __init__(self, code, message, field=None, line=None):
        super().__init__(message, field=field, line=line)
        self.code = code
        self.field = field
        self.line = line

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.field is not None:
            where.append(f"field {self.field}")
        msg = super().__str__()
        return f"{self.code}: {msg}" + (f" ({', '.join(where)})" if where else "")
