import logging
import os

from treembed import deserialize, open_storage
from treembed.service import create_app

log = logging.getLogger(__name__)
oracle = None


def get_oracle():
	global oracle
	if oracle is None:
		path = os.environ.get('ORACLE_PATH')
		if not path:
			return None
		bucket_name = os.environ.get('BUCKET_NAME')
		if bucket_name and not path.startswith('gs://'):
			path = 'gs://{0}/{1}'.format(bucket_name, path.lstrip('/'))
		oracle = deserialize(open_storage(path).read(path))
		log.info('loaded oracle with %d trees over %d vertices from %s', oracle.k, oracle.n, path)
	return oracle


app = create_app(get_oracle)


if __name__ == "__main__":
	# Local runs only; on App Engine a webserver process such as Gunicorn
	# serves the app.
	app.run(host="127.0.0.1", port=8080, debug=True)
