# treembed, probabilistic tree embeddings and distance oracles
# Copyright (C) 2026  treembed authors

# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.

# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.

# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.


class TreembedError(Exception):
    """Root of every error raised by the library."""
    exit_code = 1


class ArgumentError(TreembedError):
    exit_code = 2


class StorageError(TreembedError):
    exit_code = 3

    def __init__(self, path, reason):
        super().__init__('{0}: {1}'.format(path, reason))
        self.path = path
        self.reason = reason


class FormatError(TreembedError):
    exit_code = 4


class GraphFormatError(FormatError):
    def __init__(self, line, reason):
        super().__init__('line {0}: {1}'.format(line, reason))
        self.line = line
        self.reason = reason


class PairFormatError(FormatError):
    def __init__(self, path, line, reason):
        super().__init__('{0} line {1}: {2}'.format(path, line, reason))
        self.path = path
        self.line = line


class OracleFormatError(FormatError):
    pass


class OracleVersionError(OracleFormatError):
    pass


class StructuralError(TreembedError):
    pass


class ContractViolation(TreembedError):
    pass
