import { parseEmbeddedForm } from './types';
import { initialState, restoreInto } from './state';
import { loadSnapshot, makeAutosaver, storageAvailable } from './storage';
import { downloadManifest } from './export';
import { renderForm, showBanner } from './render';

function boot(doc: Document): void {
  const payload = doc.getElementById('line-data');
  if (!payload || !payload.textContent) {
    showBanner(doc, 'This form is missing its embedded line data and cannot be edited.', 'error');
    return;
  }
  let state;
  try {
    state = initialState(parseEmbeddedForm(JSON.parse(payload.textContent)));
  } catch (e) {
    showBanner(doc, `Embedded line data is malformed: ${e instanceof Error ? e.message : e}`, 'error');
    return;
  }

  const persistent = storageAvailable();
  if (persistent) {
    const snapshot = loadSnapshot(state.formId);
    if (snapshot) restoreInto(state, snapshot);
  } else {
    showBanner(
      doc,
      'Browser storage is unavailable: edits will not survive a reload. Export the manifest before closing.',
      'warning',
    );
  }

  const saver = persistent ? makeAutosaver(state) : null;
  renderForm(doc, state, {
    onEdit: () => saver?.touch(),
    onExport: () => {
      saver?.flush();
      downloadManifest(state, doc);
    },
  });
  window.addEventListener('pagehide', () => saver?.flush());
}

if (typeof document !== 'undefined') {
  if (document.readyState === 'loading') {
    document.addEventListener('DOMContentLoaded', () => boot(document));
  } else {
    boot(document);
  }
}
