// Recorded API payloads plus a fake fetch that serves them, so the suite
// exercises the real client against real response bodies with no server.

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { FetchFn } from "../src/api.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "..", "fixtures");

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, `${name}.json`), "utf-8")) as T;
}

type Route = {
  method: string;
  match: RegExp;
  reply: (url: string, body: unknown) => { status: number; payload: unknown };
};

function ok(name: string) {
  return () => ({ status: 200, payload: fixture(name) });
}

// The fake service mirrors the recorded session: r0 is the original
// declarative result, r1 the post-edit regeneration.
export function makeFakeFetch(): { fetchFn: FetchFn; calls: string[] } {
  const calls: string[] = [];
  let edited = false;

  const routes: Route[] = [
    {
      method: "POST",
      match: /^\/generate$/,
      reply: () =>
        edited
          ? { status: 200, payload: fixture("generate-mutated") }
          : { status: 200, payload: fixture("generate-declarative") },
    },
    {
      method: "POST",
      match: /^\/edit$/,
      reply: () => {
        edited = true;
        return {
          status: 200,
          payload: { "pending-edits": 1, "shadow-version": "b836c8971bc76515" },
        };
      },
    },
    { method: "GET", match: /^\/result\/r0\/unit\/u0\/se\?view=replay$/, reply: ok("se-replay") },
    {
      method: "GET",
      match: /^\/result\/r0\/unit\/u0\/se\?view=subgraph$/,
      reply: ok("se-subgraph"),
    },
    {
      method: "GET",
      match: /^\/result\/r0\/unit\/(u[012])\/se\?view=list$/,
      reply: (url) => {
        const unit = /unit\/(u[012])\//.exec(url)![1];
        return { status: 200, payload: fixture(`se-list-${unit}`) };
      },
    },
    {
      method: "GET",
      match: /^\/result\/r0\/unit\/u0\/system\/MOOD-TYPE\/chooser-path$/,
      reply: ok("chooser-path-mood"),
    },
    { method: "GET", match: /^\/system\/MOOD-TYPE$/, reply: ok("system-mood-type") },
    {
      method: "GET",
      match: /^\/system\/\w+$/,
      reply: () => ({ status: 404, payload: { detail: "unknown system" } }),
    },
    { method: "GET", match: /^\/regions\/graph$/, reply: ok("region-graph") },
    { method: "GET", match: /^\/regions\/THEME\/view$/, reply: ok("region-view-theme") },
    { method: "GET", match: /^\/diff\?a=r0&b=r\d+$/, reply: ok("diff-mutation") },
  ];

  const fetchFn: FetchFn = async (url, init) => {
    const method = init?.method ?? "GET";
    calls.push(`${method} ${url}`);
    for (const route of routes) {
      if (route.method === method && route.match.test(url)) {
        const body = init?.body ? JSON.parse(init.body as string) : undefined;
        const { status, payload } = route.reply(url, body);
        return new Response(JSON.stringify(payload), {
          status,
          headers: { "content-type": "application/json" },
        });
      }
    }
    return new Response(JSON.stringify({ detail: `no route for ${url}` }), {
      status: 404,
      headers: { "content-type": "application/json" },
    });
  };

  return { fetchFn, calls };
}
