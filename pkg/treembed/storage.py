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

from abc import ABCMeta, abstractmethod
import logging
import os

from .exceptions import StorageError

log = logging.getLogger(__name__)

GS_PREFIX = 'gs://'

_storage_client = None


def storage_client():
    global _storage_client
    if _storage_client is None:
        from google.cloud import storage
        _storage_client = storage.Client()
    return _storage_client


def to_bucket_and_path(p):
    segments = p[len(GS_PREFIX):] if p.startswith(GS_PREFIX) else p.lstrip('/')
    segments = segments.split('/')
    return segments[0], '/'.join(segments[1:])


class Storage(object, metaclass=ABCMeta):
    """
    Where graphs, oracle files and reports are read from and written to.
    """

    @abstractmethod
    def read(self, path):
        """
        Read a specific file

        :param path: path to file
        :return: bytes
        """
        pass

    @abstractmethod
    def write(self, path, content):
        """
        Write content to file

        :param content: bytes or str
        """
        pass

    @abstractmethod
    def file_exists(self, path):
        pass

    def read_text(self, path):
        try:
            return self.read(path).decode('utf-8')
        except UnicodeDecodeError:
            raise StorageError(path, 'not valid UTF-8 text')


class LocalStorage(Storage):

    def read(self, path):
        try:
            with open(path, 'rb') as f:
                return f.read()
        except OSError as e:
            raise StorageError(path, e.strerror or str(e))

    def write(self, path, content):
        if isinstance(content, str):
            content = content.encode('utf-8')
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, 'wb') as f:
                f.write(content)
        except OSError as e:
            raise StorageError(path, e.strerror or str(e))
        log.debug('wrote %d bytes to %s', len(content), path)

    def file_exists(self, path):
        return os.path.isfile(path)


class GCStorage(Storage):
    """
    Implementation of the Storage abstract class for Google Cloud Storage
    """

    def __init__(self, bucket):
        self.bucket = bucket

    def _blob(self, path):
        bucket_name, bucket_path = to_bucket_and_path(path)
        if bucket_name != self.bucket:
            raise StorageError(path, 'not in bucket {0}'.format(self.bucket))
        return storage_client().bucket(self.bucket).blob(bucket_path)

    def path(self, bucket_path):
        return '{0}{1}/{2}'.format(GS_PREFIX, self.bucket, bucket_path.lstrip('/'))

    def read(self, path):
        from google.cloud.exceptions import GoogleCloudError, NotFound
        try:
            return self._blob(path).download_as_bytes()
        except NotFound:
            raise StorageError(path, 'no such object')
        except GoogleCloudError as e:
            raise StorageError(path, str(e))

    def write(self, path, content):
        from google.cloud.exceptions import GoogleCloudError
        if isinstance(content, str):
            content = content.encode('utf-8')
        try:
            self._blob(path).upload_from_string(content, content_type='application/octet-stream')
        except GoogleCloudError as e:
            raise StorageError(path, str(e))
        log.debug('uploaded %d bytes to %s', len(content), path)

    def file_exists(self, path):
        return self._blob(path).exists()


def open_storage(path):
    """
    :return: GCStorage for ``gs://bucket/...`` paths, LocalStorage otherwise
    """
    if path.startswith(GS_PREFIX):
        bucket, _ = to_bucket_and_path(path)
        if not bucket:
            raise StorageError(path, 'missing bucket name')
        return GCStorage(bucket)
    return LocalStorage()


def read_bytes(path):
    return open_storage(path).read(path)


def write_bytes(path, content):
    open_storage(path).write(path, content)
