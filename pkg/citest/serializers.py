"""JSON and TSV renderings of test results.

Logged p-values are natural logs. TSV numbers carry 10 significant digits;
JSON carries full float precision.
"""
from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

TSV_FIELDS = (
    "x",
    "y",
    "cs",
    "g2",
    "chi2",
    "dof",
    "dof_adjusted",
    "log_p_g2",
    "log_p_chi2",
    "p",
    "empty_strata",
    "method",
    "degenerate",
)


class TestResultSerializer(serializers.Serializer):
    """Pass the dataset's column names as ``context["names"]``"""

    x = serializers.SerializerMethodField()
    y = serializers.SerializerMethodField()
    cs = serializers.SerializerMethodField()
    g2 = serializers.FloatField()
    chi2 = serializers.FloatField()
    dof = serializers.IntegerField()
    dof_adjusted = serializers.IntegerField()
    log_p_g2 = serializers.FloatField()
    log_p_chi2 = serializers.FloatField()
    p = serializers.FloatField(source="p_value")
    empty_strata = serializers.IntegerField()
    method = serializers.CharField()
    degenerate = serializers.BooleanField()
    ipf_iterations = serializers.IntegerField(allow_null=True)
    converged = serializers.BooleanField(allow_null=True)

    __test__ = False

    def _name(self, index):
        names = self.context.get("names")
        return names[index] if names else index

    def get_x(self, result):
        return self._name(result.spec.x)

    def get_y(self, result):
        return self._name(result.spec.y)

    def get_cs(self, result):
        return [self._name(index) for index in result.spec.cs]


def render_json(data) -> str:
    return JSONRenderer().render(data).decode("utf-8")


def _tsv_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.10g}"
    if isinstance(value, list):
        return ",".join(str(i) for i in value)
    return str(value)


def render_tsv(rows, header: bool = True) -> str:
    lines = ["\t".join(TSV_FIELDS)] if header else []
    for row in rows:
        lines.append("\t".join(_tsv_value(row[field]) for field in TSV_FIELDS))
    return "\n".join(lines) + "\n"
