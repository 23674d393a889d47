# Configuration file for the Sphinx documentation builder.
#
# For the full list of built-in configuration values, see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath("../.."))

# -- Project information -----------------------------------------------------

project = "bofdb"
copyright = "2024, bofdb contributors"
author = "bofdb contributors"
release = "0.1.0"
version = "0.1"


# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.autosummary",
    "sphinx.ext.autosectionlabel",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.napoleon",
    "sphinx.ext.viewcode",
    "sphinx_design",
]

napoleon_use_ivar = True  # needed to correctly format class attributes

autosectionlabel_prefix_document = True

templates_path = ["_templates"]

exclude_patterns = []

source_suffix = ".rst"

master_doc = "index"

pygments_style = None

add_module_names = False

intersphinx_mapping = {
    "python": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
}

# -- Options for HTML output -------------------------------------------------

html_theme = "sphinx_book_theme"

html_title = "bofdb Documentation"
