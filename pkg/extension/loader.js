// Classic-script shim: MV3 content scripts cannot be ES modules, so the
// real entry is imported as a web-accessible module instead.
(function () {
  "use strict";
  var url = chrome.runtime.getURL("dist/content.js");
  import(url).catch(function (error) {
    console.warn("gapforge: failed to load overlay module:", error);
  });
})();
