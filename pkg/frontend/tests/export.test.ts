import { describe, expect, it } from 'vitest';

import { exportManifest, manifestFilename } from '../src/export';
import { initialState, setText, toggleStatus } from '../src/state';
import { makeForm } from './helpers';

describe('exportManifest', () => {
  it('emits the importer schema exactly', () => {
    const state = initialState(makeForm(2, 'abc123'));
    const manifest = JSON.parse(exportManifest(state));
    expect(Object.keys(manifest)).toEqual(['form_id', 'lines']);
    expect(manifest.form_id).toBe('abc123');
    for (const line of manifest.lines) {
      expect(Object.keys(line)).toEqual(['id', 'sha256', 'text', 'status', 'note']);
    }
  });

  it('with no edits equals the embedded skeleton', () => {
    const form = makeForm(3);
    const manifest = JSON.parse(exportManifest(initialState(form)));
    expect(manifest).toEqual({ form_id: form.form_id, lines: form.lines });
  });

  it('preserves draft statuses and normalizes text', () => {
    const form = makeForm(2);
    const state = initialState(form);
    setText(state, form.lines[0]!.id, 'آ');
    toggleStatus(state, form.lines[0]!.id);
    const manifest = JSON.parse(exportManifest(state));
    expect(manifest.lines[0].text).toBe('آ');
    expect(manifest.lines[0].status).toBe('checked');
    expect(manifest.lines[1].status).toBe('draft');
  });

  it('is a pure function of the state', () => {
    const state = initialState(makeForm(2));
    const before = JSON.stringify(state);
    const a = exportManifest(state);
    const b = exportManifest(state);
    expect(a).toBe(b);
    expect(JSON.stringify(state)).toBe(before);
  });

  it('names the download after the form', () => {
    expect(manifestFilename(initialState(makeForm(1, 'xyz')))).toBe('transcription-xyz.json');
  });
});
