import { FormState } from './types';

/**
 * Render the manifest the CLI importer expects:
 * `{form_id, lines: [{id, sha256, text, status, note}]}`, texts in
 * canonical composition. Pure function of the state.
 */
export function exportManifest(state: FormState): string {
  return JSON.stringify(
    {
      form_id: state.formId,
      lines: state.lines.map((l) => ({
        id: l.record.id,
        sha256: l.record.sha256,
        text: l.record.text.normalize('NFC'),
        status: l.record.status,
        note: l.record.note,
      })),
    },
    null,
    2,
  );
}

export function manifestFilename(state: FormState): string {
  return `transcription-${state.formId}.json`;
}

export function downloadManifest(state: FormState, doc: Document = document): void {
  const blob = new Blob([exportManifest(state)], { type: 'application/json;charset=utf-8' });
  const url = URL.createObjectURL(blob);
  const anchor = doc.createElement('a');
  anchor.href = url;
  anchor.download = manifestFilename(state);
  doc.body.appendChild(anchor); // required for firefox
  anchor.click();
  anchor.remove();
  URL.revokeObjectURL(url);
}
