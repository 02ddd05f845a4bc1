# vim: set et nosi ai ts=2 sts=2 sw=2:
# coding: utf-8
from __future__ import absolute_import, print_function, unicode_literals
from .config import CONFIG_VERSION, ExperimentConfig, Option, Section
from .manifest import MANIFEST_NAME, Artifact, RunManifest, atomic_write, file_sha256, requires_artifacts
from .commands import ARTIFACTS, Run, cmd_ablate, cmd_consistency, cmd_drift_report, cmd_evaluate, cmd_extract, cmd_gen_data, cmd_train, run_all

__all__ = ['CONFIG_VERSION', 'ExperimentConfig', 'Option', 'Section', 'MANIFEST_NAME', 'Artifact', 'RunManifest', 'atomic_write', 'file_sha256', 'requires_artifacts', 'ARTIFACTS', 'Run', 'cmd_ablate', 'cmd_consistency', 'cmd_drift_report', 'cmd_evaluate', 'cmd_extract', 'cmd_gen_data', 'cmd_train', 'run_all']
